"""Self-similar binary chains: spectra, localization and transport.

The package builds two-symbol chains by repeated end reflections,
assembles the corresponding tight-binding Hamiltonians, diagonalizes
them with a hand-rolled tridiagonal QL solver, and analyzes the result:
level spacings, branch and cusp structure, density of states, inverse
participation ratios, a linear resonator model that predicts the
spectrum from decoupled segments, and coherent transmission between
semi-infinite leads.
"""

from .chain import (
    ReflectionSchedule,
    SymbolChain,
    apply_reflection,
    expand_runs,
    lsd_generate,
    run_length_decomposition,
    scaled_chain,
    scaled_chain_length,
)
from .eigensolver import (
    ConvergenceError,
    SpectralResult,
    eig_all,
    eig_values_only,
    sturm_eigenvalues,
)
from .hamiltonian import (
    TbParams,
    TridiagonalHamiltonian,
    build_hamiltonian,
    uniform_hamiltonian,
)
from .resonator import (
    CrossSpeciesCoincidence,
    DegenerateGroup,
    ResonatorLevel,
    LrmSpectrum,
    SpectrumComparison,
    compare_to_tb,
    cross_species_coincidences,
    enumerate_degeneracies,
    lrm_gap_width,
    lrm_spectrum,
)
from .spectral import (
    Branch,
    BranchDecomposition,
    BranchSummary,
    DosHistogram,
    branch_summary,
    detect_branches,
    detect_cusps,
    detect_minigaps,
    dos,
    dos_peak_clusters,
    eigenstate_map,
    ipr,
    ipr_values,
    spacings,
    write_pgm,
)
from .transport import (
    BandEdgeError,
    LeadParams,
    TransmissionCurve,
    TransportError,
    lead_wavenumber,
    propagating_window,
    transfer_matrix_transmission,
    transmission_at,
    transmission_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "ReflectionSchedule",
    "SymbolChain",
    "apply_reflection",
    "lsd_generate",
    "scaled_chain",
    "scaled_chain_length",
    "run_length_decomposition",
    "expand_runs",
    "TbParams",
    "TridiagonalHamiltonian",
    "build_hamiltonian",
    "uniform_hamiltonian",
    "ConvergenceError",
    "SpectralResult",
    "eig_all",
    "eig_values_only",
    "sturm_eigenvalues",
    "Branch",
    "BranchDecomposition",
    "BranchSummary",
    "DosHistogram",
    "branch_summary",
    "detect_branches",
    "detect_cusps",
    "detect_minigaps",
    "dos",
    "dos_peak_clusters",
    "eigenstate_map",
    "ipr",
    "ipr_values",
    "spacings",
    "write_pgm",
    "ResonatorLevel",
    "LrmSpectrum",
    "DegenerateGroup",
    "CrossSpeciesCoincidence",
    "SpectrumComparison",
    "lrm_spectrum",
    "lrm_gap_width",
    "enumerate_degeneracies",
    "cross_species_coincidences",
    "compare_to_tb",
    "LeadParams",
    "TransmissionCurve",
    "BandEdgeError",
    "TransportError",
    "lead_wavenumber",
    "propagating_window",
    "transmission_at",
    "transmission_sweep",
    "transfer_matrix_transmission",
    "__version__",
]
