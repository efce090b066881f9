"""Problem-agnostic transform pairs and the generalized spectral method.

A transform pair maps spatial data to a function of the spectral parameter
lam on a union of contours (the forward transform) and back via a weighted
contour integral (the inverse).  The pair diagonalizes its spatial operator
weakly,

    F[L phi](lam) = omega(lam) F[phi](lam) + R[phi](lam),

with a boundary-trace remainder R whose time-integrated inverse transform
vanishes on functions satisfying the problem's boundary conditions.  That
pair of facts is exactly what the solver uses:

    q(x, t) = (1/2pi) sum_regions int exp(i lam x) exp(-omega t) F[Q] dlam.

This module owns the generic machinery: vectorized data-transform
tabulation, frozen spectral coefficients on contour meshes, the solve path,
and the three numerical certificates (inversion, diagonalization, remainder
vanishing).  Problem modules subclass :class:`TransformPair` and provide
kernels, symbols and remainder functionals.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import contours as C
from . import quadrature as Q
from .errors import (
    DomainConditionError,
    KernelSingularityError,
    UnconvergedError,
)
from .tails import TailModel, real_line_tail

TWO_PI = 2.0 * np.pi
DOMAIN_TOL = 1e-10          # Dom-L membership gate on boundary traces
_TAIL_ORDER = 6             # boundary-expansion depth used by tail completion
_LADDER_MAX = 6             # panel-doubling rounds in data-transform tables
_TRUNCATION_DOUBLINGS = 4


# ---------------------------------------------------------------------------
# reports

@dataclass
class VerificationReport:
    """Structured pass/fail record of one numerical certificate."""

    name: str
    samples: list            # (input point, measured magnitude) rows
    tolerance: float
    max_magnitude: float = field(init=False)
    passed: bool = field(init=False)

    def __post_init__(self):
        self.max_magnitude = max((m for _, m in self.samples), default=0.0)
        self.passed = self.max_magnitude <= self.tolerance

    def to_dict(self):
        return {
            "check": self.name,
            "samples": [{"point": repr(p), "magnitude": m} for p, m in self.samples],
            "max_magnitude": self.max_magnitude,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


# ---------------------------------------------------------------------------
# vectorized data-transform tabulation

def _support_for(phi, growth_max, tol=1e-18):
    """Integration cutoff for int phi(y) * kernel dy with |kernel| <= e^{g y}."""
    if phi.domain == "interval":
        return 1.0
    y_hi = phi.support_bound(tol)
    if growth_max <= 0:
        return min(y_hi, max(40.0, 40.0 / max(phi.decay_rate or 1.0, 0.025)))
    # grow the window until the enveloped integrand is dead
    y = np.linspace(0, 4 * y_hi, 4097)
    env = np.abs(phi.value(y)) * np.exp(growth_max * y)
    alive = np.nonzero(env > tol)[0]
    if len(alive) == 0:
        return 1.0
    if alive[-1] == len(y) - 1:
        raise KernelSingularityError(
            "kernel growth exceeds the datum's decay; transform undefined")
    return float(y[alive[-1] + 1])


_PANEL_CAP = 4096
# near-sqrt(2) panel ladder: few shared meshes, modest quantization waste
_PANEL_LADDER = []
_p = 8
while _p <= _PANEL_CAP:
    _PANEL_LADDER.append(_p)
    _PANEL_LADDER.append(min(_PANEL_CAP, int(round(_p * 1.5))))
    _p *= 2
_PANEL_LADDER = sorted(set(_PANEL_LADDER))


def _ladder_at_least(p):
    for v in _PANEL_LADDER:
        if v >= p:
            return v
    return _PANEL_CAP


def data_transform_table(phi, lam, kernel_fn, osc_rate, growth_rate, settings,
                         hermitian=False, kernel_decay=None, tol_abs=None):
    """Tabulate int_domain kernel(lam, y) phi(y) dy for an array of lam.

    ``kernel_fn(lam_block, y) -> (B, Y)`` evaluates the kernel matrix;
    ``osc_rate``/``growth_rate`` give per-lam phase (rad) and growth (nats)
    densities in y that size the shared panel mesh, and ``kernel_decay``
    (nats, >= 0) lets exponentially decaying kernels shorten their
    integration window.  ``tol_abs`` optionally loosens the absolute
    tolerance per lam (callers pass the reciprocal of each node's weight in
    the surrounding contour integral, so spectrally dead nodes cost almost
    nothing).  Each lam is assigned the smallest mesh on a deterministic
    ladder at which its embedded error passes, so repeated evaluation of
    any single lam reproduces the tabulated value exactly.

    With ``hermitian`` (plain Fourier kernel, real-valued phi) only the
    half-plane Re lam >= 0 is evaluated; the rest follows from
    F(lam) = conj(F(-conj(lam))).
    """
    lam = np.asarray(lam, dtype=complex)
    if hermitian and np.any(lam.real < 0):
        folded = np.where(lam.real < 0, -np.conj(lam), lam)
        vals, errs, evals = data_transform_table(
            phi, folded, kernel_fn, osc_rate, growth_rate, settings,
            kernel_decay=kernel_decay, tol_abs=tol_abs)
        return np.where(lam.real < 0, np.conj(vals), vals), errs, evals
    vals = np.zeros(lam.shape, dtype=complex)
    errs = np.full(lam.shape, np.inf)
    osc = np.broadcast_to(np.asarray(osc_rate, dtype=float), lam.shape).ravel()
    growth = np.asarray(growth_rate, dtype=float)
    y_hi = _support_for(phi, float(np.max(growth, initial=0.0)))
    decay_like = max((phi.decay_rate or 1.0), 0.025)
    tol = np.full(lam.size, settings.abs_tol) if tol_abs is None else \
        np.maximum(np.broadcast_to(np.asarray(tol_abs, float),
                                   lam.shape).ravel(), settings.abs_tol)
    if kernel_decay is None:
        kdec = np.zeros(lam.size)
    else:
        kdec = np.broadcast_to(
            np.asarray(kernel_decay, dtype=float), lam.shape).ravel()
    # octave-quantized per-lam window: a decaying kernel dies early in y
    with np.errstate(divide="ignore"):
        want = np.minimum(y_hi, 40.0 / np.maximum(kdec, 1e-300))
    octave = np.maximum(
        0, np.floor(np.log2(y_hi / np.maximum(want, 1e-12)))).astype(int)
    # crude magnitude bound: a node whose tolerance exceeds it needs no mesh
    probe = np.linspace(0.0, y_hi, 513)
    crude = float(np.max(np.abs(phi.value(probe)))) * y_hi

    def base_panels(o, span):
        return max(settings.initial_panels_per_segment,
                   int(np.ceil(o * span / Q.SEED_PANEL_PHASE)),
                   int(np.ceil(decay_like * span / Q.MAX_PANEL_DECAY)))

    spans = y_hi / (2.0 ** octave)
    level = np.array(
        [8 if tl >= crude else _ladder_at_least(base_panels(o, s))
         for o, s, tl in zip(osc, spans, tol)], dtype=int)
    pending = np.arange(lam.size)
    lam_flat = lam.ravel()
    evals = 0
    for _round in range(2 * _LADDER_MAX + 1):
        if len(pending) == 0:
            break
        keys = level[pending] * 64 + octave.ravel()[pending]
        for key in np.unique(keys):
            sel_all = pending[keys == key]
            P, oct_ = int(key // 64), int(key % 64)
            span = y_hi / (2.0 ** oct_)
            edges = np.linspace(0.0, span, P + 1)
            ynodes, halfs = Q.panel_nodes(edges)
            y = ynodes.ravel()
            w15 = halfs[:, None] * Q._WK[None, :]
            w7 = halfs[:, None] * Q._WG[None, :]
            pv = np.asarray(phi.value(y), dtype=complex)
            cut_env = (np.abs(np.asarray(phi.value(np.asarray([span])))[0])
                       / decay_like if span < y_hi else 0.0)
            chunk = max(1, int(4e6 // max(y.size, 1)))
            for lo in range(0, len(sel_all), chunk):
                sel = sel_all[lo:lo + chunk]
                Kmat = kernel_fn(lam_flat[sel], y)
                evals += Kmat.size
                F = (Kmat * pv[None, :]).reshape(len(sel), P, 15)
                k15 = (F * w15[None, :, :]).sum(axis=2)
                g7 = (F[:, :, 1::2] * w7[None, :, :]).sum(axis=2)
                vals.ravel()[sel] = k15.sum(axis=1)
                cut = cut_env * np.exp(-kdec[sel] * span)
                errs.ravel()[sel] = np.abs(k15 - g7).sum(axis=1) + cut
        scale = np.maximum(np.abs(vals.ravel()[pending]), 1.0)
        bad = errs.ravel()[pending] > np.maximum(
            tol[pending], settings.rel_tol * scale)
        at_cap = level[pending] >= _PANEL_CAP
        widen = bad & (octave.ravel()[pending] > 0) & at_cap
        octave.ravel()[pending[widen]] -= 1
        grow = bad & ~at_cap
        level[pending[grow]] = np.array(
            [_ladder_at_least(2 * v) for v in level[pending[grow]]])
        pending = pending[bad & (~at_cap | widen)]
    return vals, errs, evals


# ---------------------------------------------------------------------------
# transform pair base class

class TransformPair:
    """Base class: one problem's transform pair over tagged contour regions.

    Subclasses fill in the forward kernels, the symbol omega, the remainder
    functional, and the Dom-L conditions; everything else (solve, the three
    certificates, meshing, tails) is generic.
    """

    name = "pair"
    tag = "pair"
    spatial_domain = "halfline"
    symbol_kind = None          # 'stokes' | 'heat' | 'bbm'

    #: default numeric span of the real-line region; beyond it the analytic
    #: tail completion is more accurate than quadrature, so the handoff sits
    #: well inside the ray truncation radius
    DEFAULT_LINE_TRUNCATION = 24.0

    def __init__(self, contour_map, truncation, line_truncation=None):
        self._contours = dict(contour_map)
        self.truncation = truncation
        self.line_truncation = line_truncation or min(
            self.DEFAULT_LINE_TRUNCATION, truncation)
        if C.REAL_LINE in self._contours:
            self._contours[C.REAL_LINE] = C.real_line(self.line_truncation)

    @property
    def regions(self):
        return tuple(self._contours.keys())

    def contour(self, region):
        return self._contours[region]

    # --- problem-specific surface -----------------------------------------
    def forward_values(self, region, phi, lam, settings, tol_abs=None):
        raise NotImplementedError

    def symbol(self, region, lam):
        raise NotImplementedError

    def symbol_derivative(self, region, lam):
        raise NotImplementedError

    def remainder_values(self, region, lam, phi):
        raise NotImplementedError

    def domain_conditions(self, phi):
        """[(condition name, violation magnitude)] for Dom-L membership."""
        raise NotImplementedError

    def apply_L(self, phi):
        raise NotImplementedError

    def rebuilt(self, truncation=None, line_truncation=None):
        """Same pair with ray and/or real-line truncation changed."""
        raise NotImplementedError

    def phase_shift(self, region):
        """Endpoint shift delta making exp(i lam (x - delta)) the decaying
        weight on this region (nonzero only for interval problems)."""
        return 0.0

    def solve_preconditions(self, Q):
        return None

    # --- generic helpers ----------------------------------------------------
    def check_domain(self, phi, tol=DOMAIN_TOL):
        for name, mag in self.domain_conditions(phi):
            if mag > tol:
                raise DomainConditionError(name, mag)

    def diagonalization_identities(self, phi):
        """Rows (label, L phi datum, omega fn, remainder fn) to certify."""
        Lphi = self.apply_L(phi)
        return [("L", Lphi, self.symbol, self.remainder_values)]

    def data_tail_blocks(self, phi, m=_TAIL_ORDER):
        return phi.tail_coefficients(m)

    def residual_scale(self, phi, m=_TAIL_ORDER):
        """Scale of the neglected remainder of the m-term tail expansion."""
        ends = [0.0] if self.spatial_domain == "halfline" else [0.0, 1.0]
        traces = sum(abs(phi.boundary(e, m)) for e in ends)
        return traces + phi.derivative_l1(m + 1)

    def sample_spectral_points(self, region, n):
        """Spread of lam samples on a region's contour at moderate |lam|."""
        contour = self.contour(region)
        pts = []
        per_seg = int(np.ceil(n / len(contour.segments)))
        for seg in contour.segments:
            if seg.kind == C.RAY:
                hi = min(4.5, 0.9 * seg.length)
                ells = np.geomspace(min(0.4, hi / 4), hi, per_seg)
                pts.extend(seg.anchor + seg.direction * ells)
            else:
                for u in np.linspace(0.08, 0.92, per_seg):
                    z, _ = seg.parametrize(u)
                    pts.append(complex(z))
        return np.asarray(pts[:n], dtype=complex)


# ---------------------------------------------------------------------------
# frozen contour tabulation

class _SegmentTable:
    """Kronrod panels of one contour segment with tabulated values."""

    def __init__(self, segment, edges, value_fn):
        self.segment = segment
        self.edges = np.asarray(edges, dtype=float)
        los, his = self.edges[:-1], self.edges[1:]
        self.nodes, self.w15, self.vals, self.val_errs = self._eval_panels(
            los, his, value_fn)

    def _eval_panels(self, los, his, value_fn):
        mids = 0.5 * (los + his)
        halfs = 0.5 * (his - los)
        v = mids[:, None] + halfs[:, None] * Q._XK[None, :]
        z, dz = self.segment._intrinsic(v)
        vals, errs = value_fn(z.ravel())
        w15 = self.segment.orientation * halfs[:, None] * Q._WK[None, :] * dz
        return (z, w15, np.asarray(vals, dtype=complex).reshape(z.shape),
                np.asarray(errs, dtype=float).reshape(z.shape))

    def row(self, weight_fn):
        """(value, err, per-panel err) of sum w * weight(lam) * vals.

        The per-panel component is the part refinement can reduce; the
        tabulation part (forward-transform errors at the nodes) is a floor.
        """
        w = weight_fn(self.nodes.ravel()).reshape(self.nodes.shape)
        prod = self.w15 * w * self.vals
        k15 = prod.sum(axis=1)
        # embedded Gauss-7 on the odd-index nodes
        g7 = (prod[:, 1::2] * (Q._WG / Q._WK[1::2])[None, :]).sum(axis=1)
        panel_err = np.abs(k15 - g7)
        tab_err = np.abs(self.w15 * w * self.val_errs).sum()
        return k15.sum(), panel_err.sum() + tab_err, panel_err

    def bisect(self, panel_indices, value_fn):
        """Split the given panels, evaluating only the new nodes."""
        split = np.zeros(len(self.edges) - 1, dtype=bool)
        split[list(set(panel_indices))] = True
        lo_new, hi_new, order = [], [], []
        for i in range(len(split)):
            lo, hi = self.edges[i], self.edges[i + 1]
            if split[i]:
                mid = 0.5 * (lo + hi)
                order.append(("new", len(lo_new)))
                lo_new.append(lo)
                hi_new.append(mid)
                order.append(("new", len(lo_new)))
                lo_new.append(mid)
                hi_new.append(hi)
            else:
                order.append(("old", i))
        nz, nw, nv, ne = self._eval_panels(
            np.asarray(lo_new), np.asarray(hi_new), value_fn)
        pick_old = [i for kind, i in order if kind == "old"]
        pick_new = [i for kind, i in order if kind == "new"]
        mask_new = np.asarray([kind == "new" for kind, _ in order])
        P = len(order)
        nodes = np.empty((P, 15), dtype=complex)
        w15 = np.empty((P, 15), dtype=complex)
        vals = np.empty((P, 15), dtype=complex)
        errs = np.empty((P, 15), dtype=float)
        nodes[~mask_new], w15[~mask_new] = self.nodes[pick_old], self.w15[pick_old]
        vals[~mask_new], errs[~mask_new] = self.vals[pick_old], self.val_errs[pick_old]
        nodes[mask_new], w15[mask_new] = nz[pick_new], nw[pick_new]
        vals[mask_new], errs[mask_new] = nv[pick_new], ne[pick_new]
        new_edges = [self.edges[0]]
        for kind, i in order:
            if kind == "old":
                new_edges.append(self.edges[i + 1])
            else:
                new_edges.append(hi_new[i])
        self.edges = np.asarray(new_edges)
        self.nodes, self.w15, self.vals, self.val_errs = nodes, w15, vals, errs

    def endpoint_magnitude(self, weight_fn):
        """|integrand| at the intrinsic far end (used for ray-tail bounds).

        The intrinsic parameter of a ray always reaches the truncation
        radius at v = 1, whatever the traversal orientation.
        """
        z, _ = self.segment._intrinsic(np.asarray([1.0]))
        w = weight_fn(z)
        last = self.vals[-1].ravel()
        mag = float(np.max(np.abs(last)))
        return float(np.abs(w[0])) * mag


class ContourTable:
    """Frozen tabulation of a spectral function on one contour.

    ``importance_fn`` estimates the largest weight each node will carry in
    any requested row; the tabulation's per-node tolerance is loosened by
    its reciprocal, so nodes in spectrally dead contour regions are cheap.
    """

    def __init__(self, contour, value_fn, settings, phase_fn=None,
                 decay_fn=None, importance_fn=None):
        self.contour = contour
        self.settings = settings
        if importance_fn is None:
            self._value_fn = value_fn
        else:
            def wrapped(lam):
                imp = np.clip(importance_fn(lam), 1e-300, 1.0)
                return value_fn(lam, settings.abs_tol / imp)
            self._value_fn = wrapped
        self.segments = []
        for seg in contour.segments:
            edges = self._seed_edges(seg, phase_fn, decay_fn)
            self.segments.append(_SegmentTable(seg, edges, self._value_fn))

    def _seed_edges(self, seg, phase_fn, decay_fn, n_probe=1025):
        if phase_fn is None and decay_fn is None:
            return np.linspace(0, 1, self.settings.initial_panels_per_segment + 1)
        v = np.linspace(0.0, 1.0, n_probe)
        z, dz = seg._intrinsic(v)
        absdz = np.abs(dz)
        d = np.where(absdz > 0, dz / np.where(absdz > 0, absdz, 1.0), 0.0)
        rate = np.zeros(n_probe)
        if decay_fn is not None:
            dec = np.asarray(decay_fn(z, d), dtype=float) * absdz
            cum = np.concatenate([[0.0], np.cumsum(0.5 * (dec[1:] + dec[:-1]) * np.diff(v))])
            # envelope cutoff: stop resolving once the integrand is dead
            drop = cum - np.minimum.accumulate(cum)
            alive = drop < -np.log(1e-17)
            rate += np.abs(dec) * (Q.SEED_PANEL_PHASE / Q.MAX_PANEL_DECAY)
        else:
            alive = np.ones(n_probe, dtype=bool)
        if phase_fn is not None:
            rate += np.asarray(phase_fn(z), dtype=float) * absdz
        rate = rate * alive
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (rate[1:] + rate[:-1]) * np.diff(v))])
        n_extra = int(min(np.ceil(cum[-1] / Q.SEED_PANEL_PHASE), Q._PRESPLIT_CAP))
        base = np.linspace(0, 1, self.settings.initial_panels_per_segment + 1)
        if n_extra <= 1:
            return base
        targets = np.linspace(0.0, cum[-1], n_extra + 1)
        return np.unique(np.concatenate([base, np.interp(targets, cum, v)]))

    def row(self, weight_fn):
        value = 0.0 + 0.0j
        err = 0.0
        for st in self.segments:
            v, e, _ = st.row(weight_fn)
            value += v
            err += e
        return value, err

    def refine(self, weight_fns, target, rounds=8):
        """Bisect panels until the reducible embedded error passes.

        Only the panel component drives refinement; the tabulated forward
        errors are a floor that panel splitting cannot lower.
        """
        for _ in range(rounds):
            worst = 0.0
            jobs = []
            for st in self.segments:
                panel_err = np.zeros(len(st.edges) - 1)
                for wf in weight_fns:
                    _, _, pe = st.row(wf)
                    panel_err = np.maximum(panel_err, pe)
                worst = max(worst, panel_err.sum())
                jobs.append((st, panel_err))
            if worst <= target:
                return True
            for st, panel_err in jobs:
                share = target / (4.0 * max(1, len(panel_err)))
                idx = np.nonzero(panel_err > share)[0]
                if len(idx):
                    order = np.argsort(panel_err[idx])[::-1][:48]
                    st.bisect(idx[order], self._value_fn)
        return False

    def node_count(self):
        return sum(st.nodes.size for st in self.segments)

    def all_nodes(self):
        return np.concatenate([st.nodes.ravel() for st in self.segments])

    def all_values(self):
        return np.concatenate([st.vals.ravel() for st in self.segments])

    def ray_tail_bound(self, weight_fn, decay_fn, phase_fn=None):
        """Envelope estimate of the contour part beyond the truncation.

        One integration by parts against the endpoint oscillation justifies
        dividing by the total (decay + phase) variation rate.
        """
        bound = 0.0
        for st in self.segments:
            if st.segment.kind != C.RAY:
                continue
            z_end, _ = st.segment._intrinsic(np.asarray([1.0]))
            d = st.segment.direction
            rate = float(np.asarray(decay_fn(z_end, np.asarray([d])))[0])
            if phase_fn is not None:
                rate += float(np.asarray(phase_fn(z_end))[0])
            mag = st.endpoint_magnitude(weight_fn)
            if rate <= 1e-9:
                bound += np.inf if mag > 1e-300 else 0.0
            else:
                bound += mag / rate
        return bound


def closure_arc(contour):
    """Arc at the truncation radius closing a sector contour's ray tails.

    For a contour whose rays bound a sector in which the integrand is
    analytic and decaying, the discarded tails beyond the truncation equal
    the integral over this arc, traversed counterclockwise from the
    outward ray's angle to the inward ray's angle (close the tails with an
    arc at infinity and apply Cauchy's theorem in the outer sector).
    """
    rays = [s for s in contour.segments if s.kind == C.RAY]
    if len(rays) != 2:
        return None
    inward = next(s for s in rays if s.orientation < 0)
    outward = next(s for s in rays if s.orientation > 0)
    R = abs(complex(outward.anchor) + outward.direction * outward.length)
    th_out = float(np.angle(outward.direction))
    th_in = float(np.angle(inward.direction))
    while th_in <= th_out:
        th_in += 2 * np.pi
    return C.ContourSegment(C.ARC, anchor=0.0, radius=R,
                            angular_span=(th_out, th_in), orientation=1)


# ---------------------------------------------------------------------------
# spectral coefficients and the solve path

class SpectralCoefficient:
    """F[Q] frozen at the quadrature nodes of every region contour.

    ``closures`` holds one cross-sector arc table per ray-bearing region;
    at t = 0 the discarded ray tails equal that arc integral exactly, so
    rows at t = 0 complete their truncation analytically instead of
    carrying an envelope bound.
    """

    def __init__(self, pair, Q_datum, settings, tables, tail_blocks,
                 resid_scale, closures=None):
        self.pair = pair
        self.datum = Q_datum
        self.settings = settings
        self.tables = tables
        self.tail_blocks = tail_blocks
        self.resid_scale = resid_scale
        self.closures = closures or {}

    def nodes(self, region):
        return self.tables[region].all_nodes()

    def values(self, region):
        return self.tables[region].all_values()

    def _weight(self, region, x, t):
        pair = self.pair

        def wf(lam):
            w = np.exp(1j * lam * x)
            if t != 0.0:
                w = w * np.exp(-pair.symbol(region, lam) * t)
            return w
        return wf

    def _decay_fn(self, region, x, t):
        pair = self.pair
        x_eff = x - pair.phase_shift(region)

        def df(z, d):
            rate = x_eff * np.imag(d)
            if t != 0.0:
                rate = rate + t * np.real(pair.symbol_derivative(region, z) * d)
            return rate
        return df

    def row(self, x, t):
        """(value, error estimate) of q(x, t); includes the 1/2pi factor."""
        value = 0.0 + 0.0j
        err = 0.0
        for region, table in self.tables.items():
            wf = self._weight(region, x, t)
            v, e = table.row(wf)
            value += v
            err += e
            if region == C.REAL_LINE:
                tv, te = real_line_tail(
                    self.pair.line_truncation, x, t,
                    self.pair.symbol_kind, self.tail_blocks)
                value += tv
                err += te + _residual_bound(self.pair, self.resid_scale, x)
            elif t == 0.0 and region in self.closures:
                cv, ce = self.closures[region].row(wf)
                value += cv
                err += ce
            else:
                err += table.ray_tail_bound(
                    wf, self._decay_fn(region, x, t),
                    self._phase_fn_at(region, x, t))
        return value / TWO_PI, err / TWO_PI

    def _phase_fn_at(self, region, x, t):
        pair = self.pair

        def pf(z):
            rate = np.full(np.shape(z), abs(x - pair.phase_shift(region)))
            if t != 0.0:
                rate = rate + t * np.abs(pair.symbol_derivative(region, z))
            return rate
        return pf


def _residual_bound(pair, resid_scale, x):
    """Bound on the neglected remainder of the m-term tail expansion."""
    m = _TAIL_ORDER
    R = pair.line_truncation
    shifts = [0.0] if pair.spatial_domain == "halfline" else [0.0, 1.0]
    mu_min = min(abs(x - d) for d in shifts)
    gain = min(1.0, 1.0 / (max(mu_min, 1e-3) * R))
    return 2.0 * resid_scale * R ** (-m) / m * gain


def _probe_rows(xs, ts):
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    probes = {(float(xs.min()), float(ts.min())), (float(xs.max()), float(ts.min())),
              (float(xs.max()), float(ts.max())), (float(xs.min()), float(ts.max()))}
    return sorted(probes)


def build_spectral_coefficient(pair, Q_datum, settings=None, xs=(1.0,), ts=(0.0,)):
    """Tabulate F[Q] on every region contour, adequately for the given rows.

    The contour truncation is doubled (up to four times) whenever the
    monitored ray tails or the real-line expansion residual are too large
    for the requested tolerance at the probe rows.
    """
    settings = settings or Q.DEFAULT_SETTINGS
    probes = _probe_rows(xs, ts)
    resid_scale = pair.residual_scale(Q_datum)
    tail_blocks = pair.data_tail_blocks(Q_datum)
    current = pair

    # the analytic-completion residual shrinks like R^-m: pick the real-line
    # span before any tabulation happens
    for _ in range(_TRUNCATION_DOUBLINGS + 1):
        worst = max(_residual_bound(current, resid_scale, x) for x, _ in probes)
        if worst <= 1e-9 or current.line_truncation >= current.truncation * 16:
            break
        current = current.rebuilt(line_truncation=2.0 * current.line_truncation)

    tables = {}
    raw_fns = {}
    for doubling in range(_TRUNCATION_DOUBLINGS + 1):
        x_hi = max(abs(x) for x, _ in probes)
        t_hi = max(t for _, t in probes)
        for region in current.regions:
            cached = tables.get(region)
            if cached is not None and (cached.contour.truncation_radius
                                       == current.contour(region).truncation_radius):
                continue

            def value_fn(lam, tol_abs=None, region=region, pair=current):
                vals, errs, _ = pair.forward_values(
                    region, Q_datum, lam, settings, tol_abs=tol_abs)
                return vals, errs

            raw_fns[region] = value_fn

            def phase_fn(z, region=region, pair=current):
                return x_hi + t_hi * np.abs(pair.symbol_derivative(region, z))

            x_eff = x_hi - current.phase_shift(region)

            def decay_fn(z, d, region=region, x_eff=x_eff, pair=current):
                rate = x_eff * np.imag(d)
                if t_hi != 0.0:
                    rate = rate + t_hi * np.real(
                        pair.symbol_derivative(region, z) * d)
                return rate

            def importance_fn(lam, region=region, pair=current):
                best = np.full(np.shape(lam), -np.inf)
                for x, t in probes:
                    expo = -x * np.imag(lam)
                    if t != 0.0:
                        expo = expo - t * np.real(pair.symbol(region, lam))
                    best = np.maximum(best, expo)
                return np.exp(np.minimum(best, 0.0))

            tables[region] = ContourTable(
                current.contour(region), value_fn, settings, phase_fn,
                decay_fn, importance_fn)
        # closure arcs complete the t = 0 rows' ray truncation exactly
        closures = {}
        if any(t == 0.0 for _, t in probes):
            x_lo = min(abs(x) for x, _ in probes)
            for region in current.regions:
                if region == C.REAL_LINE:
                    continue   # real-line tails are completed analytically
                arc = closure_arc(current.contour(region))
                if arc is None:
                    continue
                closures[region] = ContourTable(
                    C.Contour((arc,), region, current.truncation),
                    raw_fns[region], settings,
                    lambda z: np.full(np.shape(z), x_hi),
                    lambda z, d: x_hi * np.imag(d),
                    lambda lam, x0=x_lo: np.exp(
                        np.minimum(-x0 * np.imag(lam), 0.0)))
        coeff = SpectralCoefficient(
            current, Q_datum, settings, tables, tail_blocks, resid_scale,
            closures)
        # refine the meshes against the probe rows
        for region, table in tables.items():
            wfs = [coeff._weight(region, x, t) for x, t in probes]
            table.refine(wfs, settings.abs_tol * 10)
            if region in closures:
                wf0 = [coeff._weight(region, x, 0.0) for x, _ in probes]
                closures[region].refine(wf0, settings.abs_tol * 10)
        # monitored tail neglect: double the ray truncation if the estimated
        # discarded tails exceed a tenth of the absolute tolerance
        budget = settings.abs_tol / 10.0
        need_double = False
        for x, t in probes:
            if t == 0.0 and closures:
                continue
            for region, table in tables.items():
                if region == C.REAL_LINE:
                    continue
                b = table.ray_tail_bound(
                    coeff._weight(region, x, t),
                    coeff._decay_fn(region, x, t),
                    coeff._phase_fn_at(region, x, t))
                if b > budget:
                    need_double = True
        if not need_double or doubling == _TRUNCATION_DOUBLINGS:
            return coeff
        current = current.rebuilt(truncation=2.0 * current.truncation)
    return coeff


def solve(pair, Q_datum, x, t, settings=None, coeff=None):
    """q(x, t) by the generalized spectral method.  Raises on t < 0, on a
    violated compatibility condition, and on unconverged quadrature."""
    settings = settings or Q.DEFAULT_SETTINGS
    if t < 0:
        raise DomainConditionError("t >= 0", float(-t))
    pair.solve_preconditions(Q_datum)
    if coeff is None:
        coeff = build_spectral_coefficient(pair, Q_datum, settings, [x], [t])
    value, err = coeff.row(x, t)
    if err > settings.target(abs(value)) * 100:
        raise UnconvergedError(Q.QuadratureResult(value, err, 0, False))
    return value


def solve_grid(pair, Q_datum, xs, ts, settings=None):
    """Evaluate q on a grid, sharing one spectral coefficient.

    Returns (values, error estimates, converged flags, coefficient), each
    array shaped (len(xs), len(ts)).
    """
    settings = settings or Q.DEFAULT_SETTINGS
    pair.solve_preconditions(Q_datum)
    if np.any(np.asarray(ts) < 0):
        raise DomainConditionError("t >= 0")
    coeff = build_spectral_coefficient(pair, Q_datum, settings, xs, ts)
    nx, nt = len(xs), len(ts)
    vals = np.zeros((nx, nt), dtype=complex)
    errs = np.zeros((nx, nt))
    ok = np.zeros((nx, nt), dtype=bool)
    for rounds in range(3):
        bad_rows = []
        for i, x in enumerate(xs):
            for j, t in enumerate(ts):
                v, e = coeff.row(x, t)
                vals[i, j], errs[i, j] = v, e
                ok[i, j] = e <= settings.target(abs(v)) * 100
                if not ok[i, j]:
                    bad_rows.append((x, t))
        if not bad_rows:
            break
        for region, table in coeff.tables.items():
            wfs = [coeff._weight(region, x, t) for x, t in bad_rows[:8]]
            table.refine(wfs, settings.abs_tol * 10)
    return vals, errs, ok, coeff


# ---------------------------------------------------------------------------
# pointwise operations

def forward(pair, phi, region, lam, settings=None):
    """F[phi](lam) on one region by quadrature of the forward kernel."""
    settings = settings or Q.DEFAULT_SETTINGS
    vals, errs, _ = pair.forward_values(
        region, phi, np.asarray([lam], dtype=complex), settings)
    if errs[0] > settings.target(abs(vals[0])) * 10:
        raise UnconvergedError(Q.QuadratureResult(vals[0], errs[0], 0, False))
    return complex(vals[0])


def forward_many(pair, phi, region, lam, settings=None):
    settings = settings or Q.DEFAULT_SETTINGS
    vals, errs, _ = pair.forward_values(
        region, phi, np.asarray(lam, dtype=complex), settings)
    return vals, errs


def inverse(pair, f_by_region, x, settings=None, tail_blocks=None):
    """F^{-1}[f](x) = (1/2pi) sum_regions int exp(i lam x) f(lam) dlam.

    ``f_by_region`` is a callable (applied on every region) or a mapping of
    region tags to callables, each vectorized over lam.  ``tail_blocks``
    optionally supplies boundary-expansion coefficients so the truncated
    real-line tails are completed analytically (t = 0 evolution factor).
    """
    settings = settings or Q.DEFAULT_SETTINGS
    total = 0.0 + 0.0j
    err = 0.0
    for region in pair.regions:
        f = f_by_region[region] if isinstance(f_by_region, dict) else f_by_region
        x_eff = x - pair.phase_shift(region)
        res = Q.integrate_contour(
            lambda lam, f=f, x=x: np.asarray(f(lam)) * np.exp(1j * lam * x),
            pair.contour(region), settings,
            phase_rate=lambda z: np.full(np.shape(z), abs(x_eff)))
        total += res.value
        err += res.error_estimate
        if region == C.REAL_LINE and tail_blocks is not None:
            tv, te = real_line_tail(pair.truncation, x, 0.0, None, tail_blocks)
            total += tv
            err += te
    if err > settings.target(abs(total)) * 100:
        raise UnconvergedError(Q.QuadratureResult(total / TWO_PI, err / TWO_PI, 0, False))
    return total / TWO_PI


# ---------------------------------------------------------------------------
# certificates

def verify_inversion(pair, phi, sample_xs, tol=1e-6, settings=None):
    """Certify F^{-1}[F[phi]](x) = phi(x) at the sample points."""
    settings = settings or Q.DEFAULT_SETTINGS
    coeff = build_spectral_coefficient(pair, phi, settings, sample_xs, [0.0])
    rows = []
    for x in sample_xs:
        v, _ = coeff.row(x, 0.0)
        rows.append((x, float(abs(v - complex(phi.value(np.asarray([x]))[0])))))
    return VerificationReport(f"inversion[{pair.tag}]", rows, tol)


def verify_diagonalization(pair, phi, samples_per_region=10, tol=1e-8, settings=None):
    """Certify F[L phi] = omega F[phi] + R[phi] pointwise on every region.

    ``phi`` must satisfy the problem's boundary/nonlocal conditions; the
    check is gated on the boundary traces before any quadrature runs.  For
    composite problems every identity row is certified.
    """
    settings = settings or Q.DEFAULT_SETTINGS
    pair.check_domain(phi)
    rows = []
    for region in pair.regions:
        lam = pair.sample_spectral_points(region, samples_per_region)
        Fphi, eF, _ = pair.forward_values(region, phi, lam, settings)
        for label, Lphi, omega_fn, rem_fn in pair.diagonalization_identities(phi):
            FL, eL, _ = pair.forward_values(region, Lphi, lam, settings)
            resid = FL - omega_fn(region, lam) * Fphi - rem_fn(region, lam, phi)
            for L, r in zip(lam, np.abs(resid)):
                rows.append(((region, label, complex(L)), float(r)))
    return VerificationReport(f"diagonalization[{pair.tag}]", rows, tol)


def _time_integral(omega, t, tau, tau_derivs, settings, n_terms=8):
    """I(omega) = int_0^t exp(omega (s - t)) tau(s) ds, vectorized in omega.

    Large |omega| uses the integration-by-parts expansion (|exp(omega(s-t))|
    <= 1 on the contours); moderate |omega| uses panel quadrature on a mesh
    sized by the phase |omega| t.
    """
    omega = np.asarray(omega, dtype=complex)
    out = np.zeros(omega.shape, dtype=complex)
    err = np.zeros(omega.shape)
    big = np.abs(omega) * t >= 30.0
    if np.any(big):
        w = omega[big]
        e_wt = np.exp(-w * t)
        acc = np.zeros(w.shape, dtype=complex)
        for n in range(n_terms):
            acc += (-1.0) ** n * (tau_derivs(n, t) - e_wt * tau_derivs(n, 0.0)) \
                / w ** (n + 1)
        out[big] = acc
        err[big] = t * np.abs(tau_derivs(n_terms, 0.0)) / np.abs(w) ** n_terms
    if np.any(~big):
        w = omega[~big]
        phase = float(np.max(np.abs(w))) * t
        P = max(8, int(np.ceil(phase / Q.MAX_PANEL_PHASE)) * 2)
        edges = np.linspace(0.0, t, P + 1)
        snodes, halfs = Q.panel_nodes(edges)
        s = snodes.ravel()
        ws = (halfs[:, None] * Q._WK[None, :]).ravel()
        wg = (halfs[:, None] * Q._WG[None, :])
        E = np.exp(np.multiply.outer(w, s - t)) * tau(s)[None, :]
        k15 = (E.reshape(len(w), P, 15) * ws.reshape(P, 15)[None]).sum(axis=2)
        g7 = (E.reshape(len(w), P, 15)[:, :, 1::2] * wg[None, :, :]).sum(axis=2)
        out[~big] = k15.sum(axis=1)
        err[~big] = np.abs(k15 - g7).sum(axis=1)
    return out, err


def verify_remainder_vanishing(pair, q, sample_xs, t, tol=1e-6, settings=None):
    """Certify that the time-integrated remainder inverts to zero.

    ``q`` is a separable manufactured solution whose spatial part satisfies
    the problem's boundary conditions for every time.  The check evaluates

        F^{-1}[ int_0^t exp(omega (s - t)) R[q](.; s) ds ](x)

    by nested quadrature (the inner integral 10x tighter) plus the analytic
    real-line tail completion, and reports the magnitude at each x.
    """
    settings = settings or Q.DEFAULT_SETTINGS
    pair.check_domain(q.phi)
    inner = Q.QuadratureSettings(
        rel_tol=settings.rel_tol / 10.0, abs_tol=settings.abs_tol / 10.0,
        max_subdivisions=settings.max_subdivisions,
        initial_panels_per_segment=settings.initial_panels_per_segment)
    tau, tau_derivs = pair.remainder_time_weight(q)
    x_lo = min(abs(x) for x in sample_xs)
    x_hi = max(abs(x) for x in sample_xs)
    current = pair
    for doubling in range(_TRUNCATION_DOUBLINGS + 1):
        tables = {}
        for region in current.regions:
            def value_fn(lam, region=region):
                shape = current.remainder_shape(region, lam, q)
                I, ie = _time_integral(
                    current.symbol(region, lam), t, tau, tau_derivs, inner)
                return shape * I, np.abs(shape) * ie

            def phase_fn(z, region=region):
                return x_hi + t * np.abs(current.symbol_derivative(region, z))

            x_eff = x_hi - current.phase_shift(region)

            def decay_fn(z, d, region=region, x_eff=x_eff):
                return x_eff * np.imag(d)

            tables[region] = ContourTable(
                current.contour(region), value_fn, settings, phase_fn, decay_fn)
        # monitored ray tails at the least-decaying sample point
        bound = 0.0
        for region, table in tables.items():
            if region == C.REAL_LINE:
                continue
            shift = current.phase_shift(region)
            x_worst = x_lo if x_lo - shift >= 0 else x_hi
            wf = (lambda x0: lambda lam: np.exp(1j * lam * x0))(x_worst)
            bound += table.ray_tail_bound(
                wf, lambda z, d, s=shift, x0=x_worst: (x0 - s) * np.imag(d))
        if bound <= tol / 20.0 or doubling == _TRUNCATION_DOUBLINGS:
            break
        current = current.rebuilt(2.0 * current.truncation)
    blocks = current.remainder_tail_blocks(q, t)
    rows = []
    for x in sample_xs:
        total = 0.0 + 0.0j
        for region, table in tables.items():
            v, _ = table.row(lambda lam: np.exp(1j * lam * x))
            total += v
        for kind, cmap in blocks:
            tv, _ = real_line_tail(
                current.line_truncation, x, t if kind else 0.0, kind, cmap)
            total += tv
        rows.append((x, float(abs(total)) / TWO_PI))
    return VerificationReport(f"remainder-vanishing[{pair.tag}]", rows, tol)
