"""Command-line client for the learner service.

Subcommands: learn, eval, synth, sweep, serve.  By default each command calls
the service handlers in-process; with --server it posts the same payloads to a
running instance, so local and remote runs are interchangeable.

Exit codes: 0 success, 1 no solution within budget, 2 bad input (parse or
bundle errors).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import httpx
import pydantic

from .harness import MODEL_PRESETS, TaskError, dump_record, load_bundle, save_bundle
from .parsing import ParseError
from .schemas import (
    BundleModel,
    EvalRequest,
    LearnRequest,
    SceneConfigModel,
    SettingsModel,
    SweepRequest,
    SynthRequest,
)
from .service import (
    bundle_from_model,
    handle_eval,
    handle_learn,
    handle_sweep,
    handle_synth,
)
from .synth import NOISE_TIERS

logger = logging.getLogger("probilp")

EXIT_OK = 0
EXIT_NO_SOLUTION = 1
EXIT_BAD_INPUT = 2


class ClientError(Exception):
    """Input rejected, locally or by the server."""


class ServiceClient:
    """Runs requests in-process, or against a remote server when base_url is set."""

    def __init__(self, base_url=None):
        self.base_url = base_url.rstrip("/") if base_url else None

    def _call(self, path: str, handler, request, response_model):
        if self.base_url is None:
            try:
                return handler(request)
            except (ParseError, TaskError, ValueError, RuntimeError) as exc:
                raise ClientError(str(exc)) from exc
        resp = httpx.post(
            f"{self.base_url}{path}", json=request.model_dump(mode="json"), timeout=None
        )
        if resp.status_code == 400:
            raise ClientError(resp.json().get("detail", resp.text))
        resp.raise_for_status()
        return response_model.model_validate(resp.json())

    def learn(self, request: LearnRequest):
        from .schemas import LearnResponse

        return self._call("/learn", handle_learn, request, LearnResponse)

    def eval(self, request: EvalRequest):
        from .schemas import EvalResponse

        return self._call("/eval", handle_eval, request, EvalResponse)

    def synth(self, request: SynthRequest):
        from .schemas import SynthResponse

        return self._call("/synth", handle_synth, request, SynthResponse)

    def sweep(self, request: SweepRequest):
        from .schemas import SweepResponse

        return self._call("/sweep", handle_sweep, request, SweepResponse)


def _add_settings_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--tester", choices=["neurosymbolic", "binary"], default="neurosymbolic")
    parser.add_argument(
        "--constrainer", choices=["combo", "noisycombo", "maxsynth"], default="noisycombo"
    )
    parser.add_argument("--cost", choices=["mdl", "bce"], default="bce")
    parser.add_argument("--noise-level", type=float, default=0.15)
    parser.add_argument(
        "--bk-threshold", type=float, default=0.5, help="fact threshold for the binary tester"
    )
    parser.add_argument("--top-k", default="3", help="proof truncation bound, or 'inf'")
    parser.add_argument("--provenance", choices=["basic", "noisy-or"], default="basic")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--budget-seconds", type=float, default=600.0)
    parser.add_argument("--max-iterations", type=int, default=None)
    parser.add_argument("--stall-iterations", type=int, default=None)


def _settings_model(args) -> SettingsModel:
    top_k = None if str(args.top_k).lower() in ("inf", "none", "unlimited") else int(args.top_k)
    return SettingsModel(
        tester=args.tester,
        constrainer=args.constrainer,
        cost=args.cost,
        noise_level=args.noise_level,
        bk_threshold=args.bk_threshold,
        top_k=top_k,
        provenance=args.provenance.replace("-", "_"),
        budget_seconds=args.budget_seconds,
        max_iterations=args.max_iterations,
        stall_iterations=args.stall_iterations,
        seed=args.seed,
    )


def _bundle_model(task_dir) -> BundleModel:
    bundle = load_bundle(task_dir)
    return BundleModel(bias=bundle.bias_text, examples=bundle.examples_text, facts=bundle.facts)


def _bias_overrides(args, model: BundleModel) -> BundleModel:
    lines = [line for line in model.bias.splitlines()]
    for name in ("max_vars", "max_body", "max_clauses"):
        value = getattr(args, name)
        if value is None:
            continue
        lines = [l for l in lines if not l.strip().startswith(f"{name}(")]
        lines.append(f"{name}({value}).")
    return BundleModel(bias="\n".join(lines) + "\n", examples=model.examples, facts=model.facts)


def cmd_learn(args) -> int:
    client = ServiceClient(args.server)
    try:
        bundle = _bias_overrides(args, _bundle_model(args.task_dir))
        request = LearnRequest(bundle=bundle, settings=_settings_model(args))
        started = time.monotonic()
        response = client.learn(request)
        elapsed = time.monotonic() - started
    except (TaskError, ParseError, ClientError, pydantic.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    out = Path(args.out)
    out.write_text(dump_record(response.record), encoding="utf-8")
    if not response.found:
        print(f"no solution ({response.record['stop_reason']}); wrote {out}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    print(response.program)
    print(f"wrote {out} ({elapsed:.2f}s)", file=sys.stderr)
    return EXIT_OK


def cmd_eval(args) -> int:
    client = ServiceClient(args.server)
    try:
        program_text = Path(args.program).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    try:
        request = EvalRequest(
            program=program_text,
            bundle=_bundle_model(args.task_dir),
            settings=_settings_model(args),
            threshold=args.threshold,
        )
        response = client.eval(request)
    except (TaskError, ParseError, ClientError, pydantic.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    text = json.dumps(response.metrics.model_dump(), indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    print(text, end="")
    return EXIT_OK


def cmd_synth(args) -> int:
    client = ServiceClient(args.server)
    config = SceneConfigModel(seed=args.seed, tier=args.tier)
    if args.classes:
        config = config.model_copy(update={"object_classes": args.classes.split(",")})
    if args.target:
        config = config.model_copy(update={"target": args.target})
    try:
        request = SynthRequest(config=config, n_pos=args.n_pos, n_neg=args.n_neg)
        response = client.synth(request)
    except (ClientError, pydantic.ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    save_bundle(bundle_from_model(response.bundle), args.out)
    print(f"wrote task bundle to {args.out}", file=sys.stderr)
    return EXIT_OK


def cmd_sweep(args) -> int:
    client = ServiceClient(args.server)
    try:
        request = SweepRequest(
            tiers=args.tiers.split(","),
            train_sizes=[int(s) for s in args.sizes.split(",")],
            models=args.models.split(","),
            repetitions=args.repetitions,
            n_test=args.n_test,
            seed=args.seed,
            settings=_settings_model(args),
            max_workers=args.workers,
        )
        response = client.sweep(request)
    except (ClientError, pydantic.ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    if args.out:
        Path(args.out).write_text(
            json.dumps(response.report, indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        print(f"wrote report to {args.out}", file=sys.stderr)
    print(response.table)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="probilp",
        description="Learn definite-clause programs from confidence-weighted facts.",
    )
    parser.add_argument("--server", default=None, help="base URL of a running service")
    sub = parser.add_subparsers(dest="command", required=True)

    p_learn = sub.add_parser("learn", help="learn a program from a task bundle")
    p_learn.add_argument("task_dir")
    p_learn.add_argument("--out", required=True, help="result file path")
    p_learn.add_argument("--max-vars", type=int, default=None)
    p_learn.add_argument("--max-body", type=int, default=None)
    p_learn.add_argument("--max-clauses", type=int, default=None)
    _add_settings_flags(p_learn)
    p_learn.set_defaults(func=cmd_learn)

    p_eval = sub.add_parser("eval", help="evaluate a program file on a task bundle")
    p_eval.add_argument("program")
    p_eval.add_argument("task_dir")
    p_eval.add_argument("--threshold", type=float, default=None)
    p_eval.add_argument("--out", default=None)
    _add_settings_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_synth = sub.add_parser("synth", help="generate a synthetic detector-noise task bundle")
    p_synth.add_argument("--out", required=True, help="bundle directory to create")
    p_synth.add_argument("--n-pos", type=int, default=8)
    p_synth.add_argument("--n-neg", type=int, default=8)
    p_synth.add_argument("--tier", choices=sorted(NOISE_TIERS), default=None)
    p_synth.add_argument("--classes", default=None, help="comma-separated object classes")
    p_synth.add_argument("--target", default=None, help="target pattern as a clause")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.set_defaults(func=cmd_synth)

    p_sweep = sub.add_parser("sweep", help="run a (tier x size x model) experiment grid")
    p_sweep.add_argument("--tiers", default="easy,intermediate,hard")
    p_sweep.add_argument("--sizes", default="1,2,4,8")
    p_sweep.add_argument(
        "--models",
        default="ns-noisycombo-bce,binary-combo-mdl",
        help=f"comma-separated presets from: {','.join(sorted(MODEL_PRESETS))}",
    )
    p_sweep.add_argument("--repetitions", type=int, default=5)
    p_sweep.add_argument("--n-test", type=int, default=25)
    p_sweep.add_argument("--workers", type=int, default=4)
    p_sweep.add_argument("--out", default=None, help="report JSON path")
    _add_settings_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
