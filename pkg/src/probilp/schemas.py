"""Request/response models for the HTTP service.

Bundles travel inline (file name to file text), so the service itself never
touches the file system; clients own file layout.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class SettingsModel(BaseModel):
    tester: Literal["neurosymbolic", "binary"] = "neurosymbolic"
    constrainer: Literal["combo", "noisycombo", "maxsynth"] = "noisycombo"
    cost: Literal["mdl", "bce"] = "bce"
    noise_level: float = Field(default=0.15, ge=0.0, lt=1.0)
    bk_threshold: float = Field(default=0.5, ge=0.0, le=1.0)
    top_k: Optional[int] = Field(default=3, ge=1)  # null = unlimited
    provenance: Literal["basic", "noisy_or"] = "basic"
    budget_seconds: Optional[float] = 600.0
    max_iterations: Optional[int] = None
    stall_iterations: Optional[int] = None
    seed: int = 0


class BundleModel(BaseModel):
    bias: str
    examples: str
    facts: dict[str, str]


class MetricsModel(BaseModel):
    tp: int
    fp: int
    tn: int
    fn: int
    f1: float
    bce: float
    threshold: Optional[float] = None
    n_examples: Optional[int] = None


class LearnRequest(BaseModel):
    bundle: BundleModel
    settings: SettingsModel = SettingsModel()


class LearnResponse(BaseModel):
    found: bool
    record: dict  # the deterministic result record clients write to disk
    program: Optional[str] = None
    metrics: Optional[MetricsModel] = None


class EvalRequest(BaseModel):
    program: str
    bundle: BundleModel
    settings: SettingsModel = SettingsModel()
    threshold: Optional[float] = Field(default=None, ge=0.0, le=1.0)


class EvalResponse(BaseModel):
    metrics: MetricsModel


class SceneConfigModel(BaseModel):
    object_classes: list[str] = ["vehicle", "bridge", "roundabout", "road"]
    relation_preds: list[str] = ["is_on", "is_close"]
    n_objects: tuple[int, int] = (5, 8)
    target: Optional[str] = None  # default: the vehicle-on-bridge pattern
    tier: Optional[str] = None  # easy | intermediate | hard; overrides the rates below
    tp_confidence: tuple[float, float] = (0.9, 0.05)
    fp_confidence: tuple[float, float] = (0.4, 0.15)
    false_detection_rate: float = Field(default=0.05, ge=0.0, le=1.0)
    miss_rate: float = Field(default=0.05, ge=0.0, le=1.0)
    label_flip_rate: float = Field(default=0.0, ge=0.0, le=1.0)
    relation_confidence: Literal["certain", "margin"] = "certain"
    bias_body_preds: Optional[list[tuple[str, int]]] = None
    max_vars: int = 4
    max_body: int = 4
    max_clauses: int = 2
    seed: int = 0


class SynthRequest(BaseModel):
    config: SceneConfigModel = SceneConfigModel()
    n_pos: int = Field(ge=1)
    n_neg: int = Field(ge=1)


class SynthResponse(BaseModel):
    bundle: BundleModel


class SweepRequest(BaseModel):
    tiers: list[str] = ["easy", "intermediate", "hard"]
    train_sizes: list[int] = [1, 2, 4, 8]
    models: list[str] = ["ns-noisycombo-bce", "binary-combo-mdl"]
    repetitions: int = Field(default=5, ge=1)
    n_test: int = Field(default=25, ge=1)
    seed: int = 0
    scene: SceneConfigModel = SceneConfigModel()
    settings: SettingsModel = SettingsModel()
    max_workers: int = Field(default=4, ge=1)


class SweepResponse(BaseModel):
    report: dict
    table: str


class HealthResponse(BaseModel):
    status: str
    version: str
