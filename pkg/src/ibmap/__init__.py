"""Markov network structure learning by independence-based MAP scoring.

The library learns undirected independence structures from discrete
data: a Bayesian conditional-independence test scores the blanket
closure of a candidate graph, and a hill-climbing search maximizes that
score.  Synthetic-model generation, quality metrics, a grow-shrink
baseline and a structure-learning EDA round out the experiment tooling;
``ibmap.cli`` exposes everything as subcommands.
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .baselines import GsmnOptions, gsmn
from .citest import (
    Assertion,
    TestCache,
    TestOutcome,
    bayesian_ci_test,
    cached_test,
    log_dirichlet_multinomial,
)
from .dataset import ContingencyCounts, Dataset, contingency_counts, load_csv, save_csv
from .eda import (
    EdaConfig,
    Population,
    RunResult,
    critical_population_search,
    mi_structure,
    moa_run,
    onemax,
    royal_road,
    structure_gibbs_offspring,
)
from .evaluation import (
    LandscapeResult,
    TripletSample,
    accuracy,
    f_measure,
    landscape,
    sample_triplets,
)
from .graph import (
    Structure,
    enumerate_structures,
    hamming,
    load_structure,
    save_structure,
    u_separated,
)
from .ibscore import ScoreState, ib_score, mb_closure, rescore_after_flip, sigma_xy, variable_score
from .search import HCOptions, SearchResult, ibmap_hc, select_next_structure
from .synth import (
    PairwiseModel,
    gibbs_sample,
    ising_structure,
    pairwise_model,
    random_structure,
)

__version__ = "0.1.0"
