"""HTTP service exposing the learner: POST /learn, /eval, /synth, /sweep.

The handlers are plain functions over the pydantic models so the CLI can call
them in-process; the FastAPI routes are thin wrappers that map input errors to
HTTP 400.
"""

from __future__ import annotations

from dataclasses import replace

from fastapi import FastAPI, HTTPException

from . import __version__
from .harness import (
    SweepGrid,
    TaskError,
    eval_program,
    format_sweep_table,
    result_record,
    run_sweep,
    task_from_bundle,
)
from .infer import InferenceConfig
from .parsing import ParseError, parse_program, print_program
from .schemas import (
    BundleModel,
    EvalRequest,
    EvalResponse,
    HealthResponse,
    LearnRequest,
    LearnResponse,
    MetricsModel,
    SceneConfigModel,
    SettingsModel,
    SweepRequest,
    SweepResponse,
    SynthRequest,
    SynthResponse,
)
from .search import SearchSettings, learn
from .synth import DEFAULT_TARGET, SceneConfig, TaskBundle, synth_generate


def settings_from_model(model: SettingsModel) -> SearchSettings:
    return SearchSettings(
        constrainer=model.constrainer,
        cost=model.cost,
        tester=model.tester,
        noise_level=model.noise_level,
        bk_threshold=model.bk_threshold,
        infer=InferenceConfig(top_k=model.top_k, provenance=model.provenance),
        budget_seconds=model.budget_seconds,
        max_iterations=model.max_iterations,
        stall_iterations=model.stall_iterations,
        seed=model.seed,
    )


def scene_from_model(model: SceneConfigModel) -> SceneConfig:
    cfg = SceneConfig(
        object_classes=tuple(model.object_classes),
        relation_preds=tuple(model.relation_preds),
        n_objects=tuple(model.n_objects),
        target=model.target or DEFAULT_TARGET,
        tp_confidence=tuple(model.tp_confidence),
        fp_confidence=tuple(model.fp_confidence),
        false_detection_rate=model.false_detection_rate,
        miss_rate=model.miss_rate,
        label_flip_rate=model.label_flip_rate,
        relation_confidence=model.relation_confidence,
        bias_body_preds=tuple(tuple(p) for p in model.bias_body_preds)
        if model.bias_body_preds
        else None,
        max_vars=model.max_vars,
        max_body=model.max_body,
        max_clauses=model.max_clauses,
        seed=model.seed,
    )
    if model.tier:
        cfg = cfg.with_tier(model.tier)
    return cfg


def bundle_from_model(model: BundleModel) -> TaskBundle:
    return TaskBundle(model.bias, model.examples, dict(model.facts))


def bundle_to_model(bundle: TaskBundle) -> BundleModel:
    return BundleModel(bias=bundle.bias_text, examples=bundle.examples_text, facts=bundle.facts)


# ---------------------------------------------------------------------------
# Handlers
# ---------------------------------------------------------------------------


def handle_learn(request: LearnRequest) -> LearnResponse:
    task = task_from_bundle(bundle_from_model(request.bundle))
    settings = settings_from_model(request.settings)
    result = learn(task, settings)
    record = result_record(result, settings)
    metrics = None
    if record["metrics"] is not None:
        metrics = MetricsModel(threshold=result.threshold, **record["metrics"])
    return LearnResponse(
        found=result.best_program is not None,
        record=record,
        program=print_program(result.best_program) if result.best_program else None,
        metrics=metrics,
    )


def handle_eval(request: EvalRequest) -> EvalResponse:
    program = parse_program(request.program)
    task = task_from_bundle(bundle_from_model(request.bundle))
    settings = settings_from_model(request.settings)
    metrics = eval_program(program, task, settings, request.threshold)
    return EvalResponse(metrics=MetricsModel(**metrics))


def handle_synth(request: SynthRequest) -> SynthResponse:
    cfg = scene_from_model(request.config)
    bundle = synth_generate(cfg, request.n_pos, request.n_neg)
    return SynthResponse(bundle=bundle_to_model(bundle))


def handle_sweep(request: SweepRequest) -> SweepResponse:
    scene = scene_from_model(request.scene)
    grid = SweepGrid(
        tiers=tuple(request.tiers),
        train_sizes=tuple(request.train_sizes),
        models=tuple(request.models),
        repetitions=request.repetitions,
        n_test=request.n_test,
        seed=request.seed,
        scene=replace(scene, seed=0),
    )
    report = run_sweep(grid, settings_from_model(request.settings), request.max_workers)
    return SweepResponse(report=report, table=format_sweep_table(report))


# ---------------------------------------------------------------------------
# FastAPI wiring
# ---------------------------------------------------------------------------

app = FastAPI(title="probilp", version=__version__)

_INPUT_ERRORS = (ParseError, TaskError, ValueError, RuntimeError)


def _guard(handler, request):
    try:
        return handler(request)
    except _INPUT_ERRORS as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


@app.post("/learn", response_model=LearnResponse)
def learn_endpoint(request: LearnRequest) -> LearnResponse:
    return _guard(handle_learn, request)


@app.post("/eval", response_model=EvalResponse)
def eval_endpoint(request: EvalRequest) -> EvalResponse:
    return _guard(handle_eval, request)


@app.post("/synth", response_model=SynthResponse)
def synth_endpoint(request: SynthRequest) -> SynthResponse:
    return _guard(handle_synth, request)


@app.post("/sweep", response_model=SweepResponse)
def sweep_endpoint(request: SweepRequest) -> SweepResponse:
    return _guard(handle_sweep, request)
