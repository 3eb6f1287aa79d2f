"""Exact computations with the knot surgery algebra.

An exact symbolic toolkit for bordered HF^- at desk scale: arithmetic in
the knot surgery algebra and its tensor powers, type-D / type-A / type-DA
modules, box tensor products, homological perturbation, the catalog of
solid-torus / Hopf-link / merge / pair-of-pants bimodules, hypercube
compression, and surgery, connected-sum and splice homology over F2[U].
"""

from .algebra import (
    Algebra,
    cube_algebra,
    hyperbox_algebra,
    k_algebra,
    k_arrow,
    k_mono,
    k_uv,
    tensor,
    trivial_algebra,
    u_algebra,
)
from .evaluators import (
    BoxEvaluator,
    DAEvaluator,
    IdentityEvaluator,
    TypeDEvaluator,
    box,
    box_module,
    check_da_relations,
    extend_scalars,
    external_tensor_da,
)
from .perturb import (
    Inconclusive,
    ReductionData,
    equiv_check,
    reduce_evaluator,
    reduce_typed,
    transfer,
)
from .typed import (
    MorphismD,
    StructureError,
    TypeDModule,
    WindowError,
    compose_mor,
    external_tensor_D,
    identity_morphism,
    mapping_cone,
    mor_diff,
)

from . import catalog  # noqa: E402  (registry import, keep last)

__version__ = "0.1.0"
