"""Random simplicial 2-complexes: homology, minimal cycles, asphericity.

The Linial-Meshulam model Y(n, p) together with exact invariants of finite
2-complexes (densities, Betti numbers, torsion), recognition of small
minimal cycles, the small-witness asphericity criterion and bounded filling
areas.  Elimination and witness-growth kernels come from a compiled
extension when it is available; ``lmtopo.kernels.BACKEND`` says which.
"""
from .asphericity import (
    AsphericityBudget,
    AsphericityVerdict,
    AspherifyResult,
    Witness,
    aspherify,
    cd_report,
    check_aspherical,
    find_witnesses,
)
from .complex import (
    TwoComplex,
    build_complex,
    collapse,
    cut_open,
    link,
    remove_face,
    strong_components,
    subcomplex,
)
from .cycles import (
    SpaceType,
    classify_minimal_cycle,
    deletable_face,
    find_minimal_cycle,
    recognize_space,
    wedge_decomposition,
)
from .fixtures import FixtureKind, fixture
from .homology import b2, betti, homology_summary, integral_h1
from .invariants import cheeger, count_embeddings, density, mu_pair, mu_tilde, systole
from .io import dumps, loads, read, write
from .isoperimetry import EdgeLoop, empirical_isoperimetric, filling_area, replay_certificate
from .kernels import BACKEND
from .random_model import (
    GnpParams,
    TrialRecord,
    aspherify_experiment,
    b2_experiment,
    containment_experiment,
    expected_embeddings,
    sample_complex,
)

__version__ = "0.1.0"

__all__ = [
    "AsphericityBudget",
    "AsphericityVerdict",
    "AspherifyResult",
    "BACKEND",
    "EdgeLoop",
    "FixtureKind",
    "GnpParams",
    "SpaceType",
    "TrialRecord",
    "TwoComplex",
    "Witness",
    "aspherify",
    "aspherify_experiment",
    "b2",
    "b2_experiment",
    "betti",
    "build_complex",
    "cd_report",
    "check_aspherical",
    "cheeger",
    "classify_minimal_cycle",
    "collapse",
    "containment_experiment",
    "count_embeddings",
    "cut_open",
    "deletable_face",
    "density",
    "dumps",
    "empirical_isoperimetric",
    "expected_embeddings",
    "filling_area",
    "find_minimal_cycle",
    "find_witnesses",
    "fixture",
    "homology_summary",
    "integral_h1",
    "link",
    "loads",
    "mu_pair",
    "mu_tilde",
    "read",
    "recognize_space",
    "remove_face",
    "replay_certificate",
    "sample_complex",
    "strong_components",
    "subcomplex",
    "systole",
    "wedge_decomposition",
    "write",
]
