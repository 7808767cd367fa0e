"""Exact Chvátal-Gomory closures of compact convex bodies with irrational data."""

from .bodies import Ball, Body, Image, Sliced, VPolytope
from .closure import (
    ClosureResult,
    LiftWitness,
    SeparationCertificate,
    approx_boundary,
    approx_inside,
    brute_force_closure,
    cg_closure,
    face_closure_equals_restriction_check,
    lift_cut,
    lift_face_closure,
    separate_irrational,
)
from .exact import Scalar, format_scalar, parse_scalar
from .lattice import dirichlet_approx, hnf, integer_affine_hull, kronecker_hit, normalize_direction
from .polyhedra import Cut, CutSet, RationalPolyhedron, cc_polyhedron, cut_for

__all__ = [
    "Ball", "Body", "Image", "Sliced", "VPolytope",
    "ClosureResult", "LiftWitness", "SeparationCertificate",
    "approx_boundary", "approx_inside", "brute_force_closure", "cg_closure",
    "face_closure_equals_restriction_check", "lift_cut", "lift_face_closure", "separate_irrational",
    "Scalar", "format_scalar", "parse_scalar",
    "dirichlet_approx", "hnf", "integer_affine_hull", "kronecker_hit", "normalize_direction",
    "Cut", "CutSet", "RationalPolyhedron", "cc_polyhedron", "cut_for",
]
