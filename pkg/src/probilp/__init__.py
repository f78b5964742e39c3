"""probilp: learns definite-clause programs from confidence-weighted facts."""

__version__ = "0.1.0"

from .logic import (
    Atom,
    Bias,
    Clause,
    Const,
    Program,
    Var,
    alpha_equivalent,
    canonicalize,
    make_program,
    program_size,
    program_specializes,
    theta_subsumes,
)
from .parsing import (
    ExampleRecord,
    ParseError,
    ProbFact,
    parse_bias,
    parse_examples,
    parse_facts,
    parse_program,
    print_program,
)
from .rewrite import NormalizedProgram, bodies, extend, normalize, render_normalized, var_sets
from .infer import (
    InferenceConfig,
    Proof,
    enumerate_proofs,
    evaluate,
    evaluate_binary,
    prob_and,
    prob_not,
    prob_or,
)
from .score import TestResult, bce, confusion, f1, mdl, select_threshold
from .search import (
    ConstraintRecord,
    HypothesisEnumerator,
    LearnResult,
    LearnTask,
    SearchSettings,
    combine,
    constrain_combo,
    constrain_maxsynth,
    constrain_noisycombo,
    learn,
    prune,
)
from .synth import NOISE_TIERS, SceneConfig, TaskBundle, synth_generate
from .harness import (
    SweepGrid,
    load_task,
    run_eval,
    run_learn,
    run_sweep,
    save_bundle,
)
