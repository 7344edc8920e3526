"""Exact computation engine for finite-dimensional algebras: triangular
Ext-block algebras over admissible degree sets, stable-equivalence-of-Morita-
type certificates, and block matrix algebras of graded algebras."""

__version__ = "0.1.0"

from .exactlin import QQ, PrimeField, Mat, rref, kernel_basis, solve, kron
from .algebra import (
    Algebra,
    QuiverPresentation,
    GroupSpec,
    from_structure_constants,
    from_quiver,
    nakayama,
    liu_schulz,
    group_algebra,
    opposite,
    tensor_algebra,
    radical,
    primitive_idempotents,
    is_self_injective,
)
from .module import (
    Module,
    Bimodule,
    HomBasis,
    IsoVerdict,
    regular_module,
    regular_bimodule,
    cyclic_submodule,
    hom_basis,
    iso_test,
    dual,
    top_and_socle,
    projective_cover,
    syzygy,
    is_projective,
    injective_envelope,
    nakayama_transform,
    tensor_over,
)
from .homology import (
    Resolution,
    ExtSpace,
    resolve,
    ext,
    yoneda_product,
    global_dimension_probe,
    dominant_dimension,
    ext_vanishing_check,
)
from .green import (
    AdmissibleSet,
    GreenAlgebra,
    is_admissible,
    admissibility_witness,
    green_algebra,
    associativity_probe,
    green_bimodule,
    radical_shape_check,
)
from .stable_morita import (
    Certificate,
    OrbitFingerprint,
    check_certificate,
    bimodule_syzygy_generator,
    transport,
    theorem1_bimodules,
    verify_theorem1,
    orbit_fingerprint,
)
from .graded import (
    GradedAlgebra,
    GradedBimodule,
    bar_algebra,
    bar_bimodule,
    bar_certificate,
    graded_bimodule_syzygy,
)
