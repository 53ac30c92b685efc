#!/usr/bin/env python3
"""
Construction and validation of Gaussian H^1 atoms and X^k atoms

X^k atoms are built as a = t L^k u with u a mean-zero two-bump profile supported in
the ball. L^k u is exact: Taylor jets of order 2k are pushed through the closed-form
bump and L = -1/2 Laplacian + x . grad acts on the jets.
"""

import logging
import math
from typing import Callable, List, Optional, Sequence, Union

import numpy as np

from models.atoms import (AtomCertificate, BumpComponent, BumpProfile, GenericH1Profile,
                          H1Atom, PlateauProfile, XkAtom)
from models.errors import DegenerateProfileError, JetOverflowError, QuadratureError
from models.geometry import AdmissibleBall, QuadratureGrid, WeightFunction
from models.multiindex import HermiteCoeffs
from models.operators import Family, RieszOrder
from .gaussian import gamma_measure
from .hermite import evaluate, from_values
from .jets import TaylorJet, apply_ou, coordinate_jets, jet_space, radial_bump_jet
from .quadrature import ball_grid, full_space_grid

logger = logging.getLogger(__name__)

MAX_ORDER = 3
DEGENERATE_RATIO = 0.98
SUPPORT_RTOL = 1e-12
NORM_RTOL = 1e-9
# Default truncation degree of the spectral checks, per dimension
DEFAULT_DEGREE = {1: 40, 2: 30, 3: 12}

Atom = Union[H1Atom, XkAtom]


def omega(k: int, radius: float) -> float:
    """omega_k(r_B) = 1 for k <= 2 and r_B^(k-2) for k >= 3"""
    return 1.0 if k <= 2 else radius ** (k - 2)


def atom_grid(ball: AdmissibleBall, breakpoints: Sequence[float] = (), radial_nodes: int = 16,
              radial_panels: int = 4, angular_nodes: int = 16, grading: int = 6) -> QuadratureGrid:
    """Ball grid with panel edges at the profile's radial breakpoints"""
    return ball_grid(ball, radial_nodes, radial_panels, angular_nodes, breakpoints, grading)


def _mean_zero_mix(positive: BumpComponent, negative: BumpComponent, grid: QuadratureGrid) -> float:
    numerator = grid.gamma_weights @ positive(grid.nodes)
    denominator = grid.gamma_weights @ negative(grid.nodes)
    if not denominator > 0.0:
        raise QuadratureError(f"Bump mass underflows on grid '{grid.spec}'")
    return float(numerator / denominator)


def concentric_profile(ball: AdmissibleBall, rho_outer: Optional[float] = None,
                       rho_inner: Optional[float] = None) -> BumpProfile:
    """
    u = phi(|x-c|/rho_outer) - mix * phi(|x-c|/rho_inner) with int u d(gamma) = 0

    Defaults: rho_outer = 0.9 r_B, rho_inner = 0.5 r_B.

    Raises:
        DegenerateProfileError: When the two radii are nearly equal
    """
    rho_outer = 0.9 * ball.radius if rho_outer is None else rho_outer
    rho_inner = 0.5 * ball.radius if rho_inner is None else rho_inner
    if not 0 < rho_inner < rho_outer < ball.radius * (1.0 + SUPPORT_RTOL):
        raise ValueError(f"Need 0 < rho_inner < rho_outer <= r_B, got {rho_inner}, {rho_outer}, {ball.radius}")
    if rho_inner / rho_outer > DEGENERATE_RATIO:
        raise DegenerateProfileError(
            f"Bump radii {rho_inner:g} and {rho_outer:g} are nearly proportional; mean-zero mixing is ill-conditioned")
    grid = atom_grid(ball, (rho_inner, rho_outer))
    outer = BumpComponent(ball.center, rho_outer)
    inner = BumpComponent(ball.center, rho_inner)
    mix = _mean_zero_mix(outer, inner, grid)
    return BumpProfile((outer, BumpComponent(ball.center, rho_inner, -mix)), (rho_inner, rho_outer))


def off_centre_profile(ball: AdmissibleBall, offset: float = 0.5, radius: float = 0.45) -> GenericH1Profile:
    """Bumps at c +/- offset r_B e_1 of radius `radius` r_B, opposite signs, mean zero"""
    if offset + radius >= 1.0:
        raise ValueError(f"Bumps at offset {offset} with radius {radius} leave the ball")
    shift = np.zeros(ball.dim)
    shift[0] = offset * ball.radius
    right = BumpComponent(tuple(ball.center_array + shift), radius * ball.radius)
    left = BumpComponent(tuple(ball.center_array - shift), radius * ball.radius)
    breakpoints = ((offset - radius) * ball.radius, (offset + radius) * ball.radius)
    mix = _mean_zero_mix(right, left, _generic_grid(ball, breakpoints))
    return GenericH1Profile((right, BumpComponent(left.center, left.radius, -mix)), breakpoints)


def _generic_grid(ball: AdmissibleBall, breakpoints: Sequence[float]) -> QuadratureGrid:
    if ball.dim == 1:
        return atom_grid(ball, breakpoints)
    return atom_grid(ball, breakpoints, radial_panels=8, angular_nodes=32)


def profile_grid(ball: AdmissibleBall, profile: BumpProfile) -> QuadratureGrid:
    if isinstance(profile, GenericH1Profile):
        return _generic_grid(ball, profile.breakpoints)
    return atom_grid(ball, profile.breakpoints)


def profile_jet(space, points: np.ndarray, profile: BumpProfile) -> TaylorJet:
    jet = None
    for component in profile.components:
        term = radial_bump_jet(space, points, np.asarray(component.center), component.radius) * component.coefficient
        jet = term if jet is None else jet + term
    return jet


def _ladder_jets(profile: BumpProfile, points: np.ndarray, steps: int, shift: int,
                 extra_order: int = 0) -> List[TaylorJet]:
    """[v, (L+shift)v, ..., (L+shift)^steps v] as jets"""
    points = np.asarray(points, dtype=float)
    space = jet_space(points.shape[1], 2 * steps + extra_order)
    jets = [profile_jet(space, points, profile)]
    for _ in range(steps):
        nxt = apply_ou(jets[-1], points)
        if shift:
            nxt = nxt + jets[-1] * float(shift)
        jets.append(nxt)
    return jets


def ou_ladder(profile: BumpProfile, points, steps: int, shift: int = 0) -> List[np.ndarray]:
    """Values of (L + shift I)^j u at the points, j = 0..steps"""
    return [jet.value.copy() for jet in _ladder_jets(profile, points, steps, shift)]


def make_h1_atom(ball: Optional[AdmissibleBall] = None, profile: Optional[BumpProfile] = None,
                 lift: int = 0, grid: Optional[QuadratureGrid] = None, dim: int = 1) -> H1Atom:
    """
    (1,2)-atom saturating ||a||_2 = gamma(B)^{-1/2}

    Without a ball the constant atom 1 is returned. With lift j the atom is
    t (L+I)^j v, still supported in B with mean zero.
    """
    if ball is None:
        grid = full_space_grid(dim, 8)
        return H1Atom(None, None, 1.0, 0, grid, np.ones(grid.size))
    if lift < 0 or lift > MAX_ORDER:
        raise ValueError(f"Lift must be in 0..{MAX_ORDER}, got {lift}")
    profile = concentric_profile(ball) if profile is None else profile
    grid = profile_grid(ball, profile) if grid is None else grid
    raw = ou_ladder(profile, grid.nodes, lift, shift=1)[lift]
    gamma_ball = gamma_measure(grid)
    norm = math.sqrt(float(grid.gamma_weights @ raw ** 2))
    if norm == 0.0:
        raise DegenerateProfileError(f"Profile vanishes on {ball}")
    scale = gamma_ball ** -0.5 / norm
    return H1Atom(ball, profile, scale, lift, grid, scale * raw)


def make_xk_atom(k: int, ball: AdmissibleBall, profile: Optional[BumpProfile] = None,
                 normalization: str = "saturate", grid: Optional[QuadratureGrid] = None) -> XkAtom:
    """
    X^k atom a = t L^k u

    Args:
        k: Order, 1..3
        ball: Admissible ball holding the support
        profile: Mean-zero profile (defaults to the concentric two-bump)
        normalization: 'saturate' sets ||a||_2 = omega_k gamma(B)^{-1/2};
            'cap' uses t = min(1, omega_k gamma(B)^{-1/2} / ||L^k u||_2)
        grid: Optional quadrature grid on the ball

    Raises:
        JetOverflowError: When the jets overflow, with a suggested wider profile radius
    """
    if not 1 <= k <= MAX_ORDER:
        raise ValueError(f"X^k atoms are built for k in 1..{MAX_ORDER}, got {k}")
    if normalization not in ("saturate", "cap"):
        raise ValueError(f"Unknown normalization '{normalization}'")
    profile = concentric_profile(ball) if profile is None else profile
    grid = profile_grid(ball, profile) if grid is None else grid
    try:
        levels = tuple(ou_ladder(profile, grid.nodes, k))
    except JetOverflowError as exc:
        smallest = min(c.radius for c in profile.components)
        raise JetOverflowError(f"{exc} for profile radius {smallest:g} on {ball}",
                               suggested_radius=min(2.0 * smallest, ball.radius)) from exc
    norm = math.sqrt(float(grid.gamma_weights @ levels[k] ** 2))
    if norm == 0.0:
        raise DegenerateProfileError(f"L^{k} u vanishes on {ball}")
    target = omega(k, ball.radius) * gamma_measure(grid) ** -0.5 / norm
    scale = target if normalization == "saturate" else min(1.0, target)
    logger.debug("X^%d atom on %s: scale %.3e, %d nodes", k, ball, scale, grid.size)
    return XkAtom(k, ball, profile, scale, grid, levels)


def atom_function(atom: Atom) -> Callable[[np.ndarray], np.ndarray]:
    """Evaluate the atom at arbitrary points"""
    if isinstance(atom, XkAtom):
        return lambda points: atom.scale * ou_ladder(atom.profile, np.atleast_2d(points), atom.order)[atom.order]
    if atom.is_constant:
        return lambda points: np.ones(len(np.atleast_2d(points)))
    return lambda points: atom.scale * ou_ladder(atom.profile, np.atleast_2d(points), atom.lift, shift=1)[atom.lift]


def weighted_chain(values: np.ndarray, grid: QuadratureGrid, order: int, radius: float) -> tuple:
    """
    (||a||_{L^1(w)}, ||w 1_B||_2 ||a||_2, ||w 1_B||_2 omega gamma(B)^{-1/2}, 1 + 2^{k-2})

    Every entry is bounded by the next one.
    """
    weights = WeightFunction(order)(grid.nodes)
    gw = grid.gamma_weights
    lhs = float(gw @ (np.abs(values) * weights))
    w_norm = math.sqrt(float(gw @ weights ** 2))
    a_norm = math.sqrt(float(gw @ values ** 2))
    third = w_norm * omega(order, radius) * gamma_measure(grid) ** -0.5
    return lhs, w_norm * a_norm, third, 1.0 + 2.0 ** (order - 2)


def _chain_holds(chain: tuple) -> bool:
    return all(left <= right * (1.0 + SUPPORT_RTOL) for left, right in zip(chain[:-1], chain[1:]))


def _basic_checks(atom: Atom, bound: float, mean_tolerance: float) -> tuple:
    grid = atom.grid
    values = atom.values
    gw = grid.gamma_weights
    mean = float(gw @ values)
    l1 = float(gw @ np.abs(values))
    l2 = math.sqrt(float(gw @ values ** 2))
    support_ok = atom.profile.reach(atom.ball.center) <= atom.ball.radius * (1.0 + SUPPORT_RTOL)
    mean_ok = abs(mean) <= mean_tolerance * max(1.0, l1)
    l2_ok = l2 <= bound * (1.0 + NORM_RTOL)
    return mean, l2, support_ok, mean_ok, l2_ok


def validate_h1_atom(atom: Atom, mean_tolerance: float = 1e-8) -> AtomCertificate:
    """Support in B, vanishing mean and ||a||_2 <= gamma(B)^{-1/2}; the constant atom passes outright"""
    if isinstance(atom, H1Atom) and atom.is_constant:
        return AtomCertificate("constant", 0, 1.0, 1.0, 1.0, 1.0, True, True, True)
    gamma_ball = gamma_measure(atom.grid)
    bound = gamma_ball ** -0.5
    mean, l2, support_ok, mean_ok, l2_ok = _basic_checks(atom, bound, mean_tolerance)
    cert = AtomCertificate("h1", 0, gamma_ball, mean, l2, bound, support_ok, mean_ok, l2_ok)
    if not cert.passed:
        logger.info("H1 validation failed on %s: %s", atom.ball, cert.to_dict())
    return cert


def atom_coefficients(atom: Atom, degree: int) -> HermiteCoeffs:
    return from_values(atom.grid, atom.values, degree)


def tail_fraction(coeffs: HermiteCoeffs, values: np.ndarray, grid: QuadratureGrid) -> float:
    """Relative L^2 mass of the function missed by its truncated expansion"""
    total = float(grid.gamma_weights @ values ** 2)
    if total == 0.0:
        return 0.0
    return math.sqrt(max(0.0, 1.0 - coeffs.norm() ** 2 / total))


def _divide_by_power(coeffs: HermiteCoeffs, power: int) -> HermiteCoeffs:
    return HermiteCoeffs(coeffs.dim, {b: v / b.order ** power for b, v in coeffs.items() if b.order > 0})


def _status(value: float, tolerance: float, uncertainty: float) -> str:
    if value - uncertainty > tolerance:
        return "fail"
    if value < tolerance and uncertainty <= 0.5 * tolerance:
        return "pass"
    return "inconclusive"


def validate_xk_atom(atom: Atom, order: Optional[int] = None, degree: Optional[int] = None,
                     tolerance: float = 1e-4, probe_tolerance: float = 1e-3,
                     mean_tolerance: float = 1e-8) -> AtomCertificate:
    """
    Certificate of a as an X^j atom, j = order (default: the atom's own order)

    Checks support, mean and ||a||_2 <= omega_j gamma(B)^{-1/2}; then, on the Hermite
    expansion to total degree `degree`:
      - reconstruction: c_a(beta)/|beta|^j against the coefficients of t L^{k-j} u
      - outside mass: relative L^2 mass of the truncated L^{-j} a outside the ball
      - probe: normalised pairing of L^{-j} a with Pi_0 of a plateau equal to 1 on B
    Spectral checks whose truncation tail is too large to decide are 'inconclusive'.
    """
    if isinstance(atom, H1Atom) and atom.is_constant:
        raise ValueError("The constant atom carries no X^k certificate")
    own = atom.order if isinstance(atom, XkAtom) else 0
    j = own if order is None else order
    if not 1 <= j <= max(own, MAX_ORDER):
        raise ValueError(f"Certificate order must be in 1..{MAX_ORDER}, got {j}")
    if isinstance(atom, XkAtom) and j > own:
        raise ValueError(f"An X^{own} atom cannot be certified at order {j}")
    ball, grid = atom.ball, atom.grid
    degree = DEFAULT_DEGREE[ball.dim] if degree is None else degree
    gamma_ball = gamma_measure(grid)
    bound = omega(j, ball.radius) * gamma_ball ** -0.5
    mean, l2, support_ok, mean_ok, l2_ok = _basic_checks(atom, bound, mean_tolerance)
    cert = AtomCertificate("xk" if isinstance(atom, XkAtom) else "h1", j, gamma_ball,
                           mean, l2, bound, support_ok, mean_ok, l2_ok)

    chain = weighted_chain(atom.values, grid, j, ball.radius)
    cert.weighted_chain = chain
    cert.weighted_ok = _chain_holds(chain) if l2_ok else False

    c_a = atom_coefficients(atom, degree)
    c_rec = _divide_by_power(c_a, j)
    rec_norm = c_rec.norm()
    if isinstance(atom, XkAtom):
        u_values = atom.scale * atom.levels[0]
        c_u = from_values(grid, u_values, degree)
        cert.tail_fraction = tail_fraction(c_u, u_values, grid)
        reference = from_values(grid, atom.scale * atom.levels[own - j], degree)
        reference = HermiteCoeffs(reference.dim, {b: v for b, v in reference.items() if b.order > 0})
        cert.reconstruction_error = (c_rec - reference).norm() / max(reference.norm(), 1e-300)
        cert.reconstruction = "pass" if cert.reconstruction_error < tolerance else "fail"
        cert.proposition_ratio = math.sqrt(float(grid.gamma_weights @ u_values ** 2)) \
            * math.sqrt(gamma_ball) / ball.radius ** (2 * own)
    else:
        a_tail = tail_fraction(c_a, atom.values, grid) * l2
        cert.tail_fraction = a_tail / (degree + 1) ** j / max(rec_norm, 1e-300)
        cert.proposition_ratio = rec_norm * math.sqrt(gamma_ball) / ball.radius ** (2 * j)

    if rec_norm > 0.0:
        inside = float(grid.gamma_weights @ evaluate(c_rec, grid.nodes) ** 2)
        cert.outside_mass = math.sqrt(max(0.0, rec_norm ** 2 - inside)) / rec_norm
    else:
        cert.outside_mass = 0.0
    cert.outside = _status(cert.outside_mass, tolerance, cert.tail_fraction)
    if isinstance(atom, H1Atom):
        cert.reconstruction = cert.outside

    plateau = PlateauProfile(ball.center, ball.radius, 2.0 * ball.radius)
    wide = ball_grid(ball.scaled(2.0), 16, 4, 16, (ball.radius,), 4)
    c_phi = from_values(wide, plateau(wide.nodes), degree)
    c_phi = HermiteCoeffs(c_phi.dim, {b: v for b, v in c_phi.items() if b.order > 0})
    denominator = rec_norm * c_phi.norm()
    cert.probe = c_rec.dot(c_phi) / denominator if denominator > 0.0 else 0.0
    cert.probe_status = _status(abs(cert.probe), probe_tolerance, cert.tail_fraction)

    if not cert.passed:
        logger.info("X^%d validation failed on %s: %s", j, ball, cert.to_dict())
    return cert


def has_local_route(order: RieszOrder, atom: Atom) -> bool:
    """
    Whether the transform of the atom is a differential expression of the profile

    Old family on a = t L^m u: R a = t 2^{-k/2} partial^alpha L^{m-k/2} u for even k, m >= k/2.
    New family on a = t (L+I)^j v: R* a = t D*^alpha (L+I)^{j-k/2} v for even k, j >= k/2.
    """
    if order.k % 2:
        return False
    if order.family is Family.OLD:
        return isinstance(atom, XkAtom) and atom.order >= order.k // 2
    return isinstance(atom, H1Atom) and not atom.is_constant and atom.lift >= order.k // 2


def local_riesz_values(order: RieszOrder, atom: Atom, points=None) -> np.ndarray:
    """Exact transform values at the points (default: the atom's grid nodes), supported in B"""
    if not has_local_route(order, atom):
        raise ValueError(f"No local route for {order.label()} on this atom")
    points = atom.grid.nodes if points is None else np.atleast_2d(np.asarray(points, dtype=float))
    half = order.k // 2
    if order.family is Family.OLD:
        steps = atom.order - half
        jet = _ladder_jets(atom.profile, points, steps, 0, extra_order=order.k)[-1]
        return atom.scale * 2.0 ** (-order.k / 2.0) * jet.partial(order.alpha)
    steps = atom.lift - half
    jet = _ladder_jets(atom.profile, points, steps, 1, extra_order=order.k)[-1]
    coords = coordinate_jets(jet.space, points)
    for i, times in enumerate(order.alpha):
        for _ in range(times):
            # delta*_i = -(1/sqrt 2) d_i + sqrt 2 x_i
            jet = jet.derivative(i) * (-1.0 / math.sqrt(2.0)) + coords[i] * jet * math.sqrt(2.0)
    return atom.scale * jet.value.copy()
