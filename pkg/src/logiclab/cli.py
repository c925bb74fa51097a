"""Command-line entry points.

Exit codes: 0 proved (or ok), 1 refuted, 2 error. For an exercise meant
to be refuted, a script that ends in an accepted refutation exits 1 —
that exit code simply reports the outcome class, so for refute exercises
it is the successful result.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .corpus import CORPUS_SCRIPTS, corpus_exercises
from .errors import LogicError
from .exercises import ExerciseSpec, exercise_from_json, pack_dumps, pack_loads
from .generator import GeneratorConfig, generate
from .kernel import goal_to_json
from .sessions import SessionStore, session_state_json
from .tactics import ScriptRunner, hint, parse_script

EXIT_PROVED = 0
EXIT_REFUTED = 1
EXIT_ERROR = 2


def _load_exercise(path: str) -> ExerciseSpec:
    data = json.loads(Path(path).read_text())
    if "exercises" in data:  # a pack: take its first exercise
        exercises = pack_loads(Path(path).read_text())
        if not exercises:
            raise click.ClickException("pack contains no exercises")
        return exercises[0]
    return exercise_from_json(data)


def _print_goals(runner: ScriptRunner):
    state = runner.state
    if not state.open_goals:
        click.echo("no open goals")
        return
    for gid in state.open_goals:
        goal = goal_to_json(state.goals[gid])
        click.echo(f"goal {gid}:")
        for h in goal["hypotheses"]:
            click.echo(f"  {h['label']}: {h['formula']}")
        click.echo("  " + "-" * 40)
        click.echo(f"  {goal['conclusion']}")


@click.group()
def main():
    """Prove-or-refute workbench for classical logic."""


@main.command()
@click.argument("exercise", type=click.Path(exists=True))
@click.argument("script", type=click.Path(exists=True))
def check(exercise, script):
    """Run SCRIPT against EXERCISE and report the outcome."""
    spec = _load_exercise(exercise)
    runner = ScriptRunner(spec.sequent, spec.signature, spec.definitions, spec.automation_cap)
    try:
        parsed = parse_script(Path(script).read_text(), spec.signature)
        for cmd, line in zip(parsed.commands, parsed.lines):
            report = runner.run(cmd)
            click.echo(f"ok: {line}")
    except LogicError as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    click.echo(f"outcome: {runner.status}")
    if runner.status == "proved":
        sys.exit(EXIT_PROVED)
    if runner.status == "refuted":
        sys.exit(EXIT_REFUTED)
    click.echo("script ended with the session still open", err=True)
    sys.exit(EXIT_ERROR)


@main.command()
@click.argument("exercise", type=click.Path(exists=True))
def repl(exercise):
    """Interactive dialogue on EXERCISE (:hint, :goals, :quit)."""
    spec = _load_exercise(exercise)
    runner = ScriptRunner(spec.sequent, spec.signature, spec.definitions, spec.automation_cap)
    click.echo(f"exercise {spec.id} [{spec.mode}]")
    _print_goals(runner)
    while runner.status == "open":
        try:
            line = click.prompt("> ", prompt_suffix="")
        except (EOFError, KeyboardInterrupt, click.Abort):
            break
        line = line.strip()
        if not line:
            continue
        if line == ":quit":
            break
        if line == ":goals":
            _print_goals(runner)
            continue
        if line == ":hint":
            state = runner.state
            if state.open_goals:
                h = hint(state, state.open_goals[0])
                click.echo(f"hint [{h.rule_family}]: {h.text}")
            continue
        try:
            report = runner.run_text(line)
            click.echo(report.message or "ok")
            _print_goals(runner)
        except LogicError as exc:
            click.echo(f"rejected: {exc.code}: {exc}")
    click.echo(f"outcome: {runner.status}")
    sys.exit(
        EXIT_PROVED if runner.status == "proved"
        else EXIT_REFUTED if runner.status == "refuted"
        else EXIT_ERROR
    )


@main.command()
@click.option("--seed", type=int, required=True, envvar="LOGICLAB_SEED")
@click.option("--mode", type=click.Choice(["prove", "refute", "mystery"]), default="prove")
@click.option("--symbols", type=int, default=3, show_default=True)
@click.option("--depth", type=int, default=4, show_default=True)
@click.option("--hypotheses", type=int, default=1, show_default=True)
@click.option("--count", type=int, default=1, show_default=True,
              help="Generate COUNT exercises from consecutive seeds.")
@click.option("--out", type=click.Path(), default=None, help="Write the pack here.")
@click.option("--student", "student_pack", is_flag=True,
              help="Emit the student-facing pack variant.")
def gen(seed, mode, symbols, depth, hypotheses, count, out, student_pack):
    """Generate a seeded exercise pack."""
    try:
        specs = [
            generate(GeneratorConfig(
                seed=seed + i, mode=mode, num_symbols=symbols,
                max_depth=depth, num_hypotheses=hypotheses,
            ))
            for i in range(count)
        ]
    except LogicError as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    text = pack_dumps(specs, "student" if student_pack else "instructor")
    if out:
        Path(out).write_text(text)
        click.echo(f"wrote {len(specs)} exercise(s) to {out}")
    else:
        click.echo(text, nl=False)
    sys.exit(EXIT_PROVED)


@main.command()
@click.option("--data-dir", type=click.Path(), default="./logiclab-data",
              envvar="LOGICLAB_DATA_DIR", show_default=True)
@click.option("--port", type=int, default=8000, envvar="LOGICLAB_PORT", show_default=True)
@click.option("--host", default="127.0.0.1", envvar="LOGICLAB_HOST", show_default=True)
def serve(data_dir, port, host):
    """Serve the HTTP API, seeding the corpus pack on first run."""
    import uvicorn

    from .service import create_app

    store = SessionStore(data_dir)
    if not store.exercises():
        store.add_exercises(corpus_exercises(), pack_name="corpus")
        click.echo(f"seeded corpus pack into {data_dir}")
    uvicorn.run(create_app(store), host=host, port=port)


@main.command()
@click.argument("session_file", type=click.Path(exists=True))
@click.option("--data-dir", type=click.Path(), default=None, envvar="LOGICLAB_DATA_DIR",
              help="Store root (defaults to the session file's grandparent).")
def replay(session_file, data_dir):
    """Print the proof movie recorded in SESSION_FILE."""
    path = Path(session_file)
    root = Path(data_dir) if data_dir else path.parent.parent
    store = SessionStore(root)
    session_id = path.stem
    try:
        log = store.replay(session_id)
    except LogicError as exc:
        click.echo(f"error: {exc.code}: {exc}", err=True)
        sys.exit(EXIT_ERROR)
    session = store.get_session(session_id)
    click.echo(f"session {session_id} on {session.exercise_id}: {session.status}")
    click.echo(f"frames: {len(log.frames)}")
    for event, frame_idx in zip(log.events, log.event_frames):
        mark = "ok " if event.accepted else "REJ"
        click.echo(f"  [{event.ordinal:3d}] {mark} {event.command}  (frame {frame_idx})")
    for i, frame in enumerate(log.frames):
        click.echo(f"frame {i}: {len(frame.open_goals)} open goal(s)  {log.digests[i][:12]}")
    # an open session replays fine; only a refuted one gets the refuted code
    sys.exit(EXIT_REFUTED if session.status == "refuted" else EXIT_PROVED)


if __name__ == "__main__":
    main()
