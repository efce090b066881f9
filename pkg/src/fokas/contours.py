"""Complex-plane contours carrying the transform pairs.

Each inversion contour is an ordered list of parametrized segments with a
region tag.  Four contour families are needed:

* the real line (two truncated rays through the origin),
* the boundary of the sector ``pi/3 < arg(lam) < 2pi/3``,
* the boundaries of ``{lam in C+- : Re(lam^2) < 0, |lam| > rho}``,
* a small circle centred at ``lam = i``.

Infinite rays are truncated at a configurable radius (default 40) and use the
substitution ``u -> length * u**2`` so quadrature nodes cluster near the inner
endpoint, where the kernels vary fastest.  Orientation is encoded by segment
order plus a per-segment sign: every segment has an intrinsic parametrization
and a traversal that either follows it or runs it backwards.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import InvalidGeometryError

# Region tags.  A contour's tag selects the forward-kernel formula of a pair.
REAL_LINE = "REAL_LINE"
BOUNDARY_D_PLUS = "BOUNDARY_D_PLUS"
BOUNDARY_D_RHO_PLUS = "BOUNDARY_D_RHO_PLUS"
BOUNDARY_D_RHO_MINUS = "BOUNDARY_D_RHO_MINUS"
CIRCLE_C = "CIRCLE_C"

DEFAULT_TRUNCATION = 40.0

RAY = "infinite-ray"
SEGMENT = "finite-segment"
ARC = "circular-arc"
CIRCLE = "full-circle"


@dataclass(frozen=True)
class ContourSegment:
    """One parametrized piece of a contour.

    ``anchor`` is the ray/segment start point, or the centre for arcs and
    circles.  ``direction`` is a unit complex direction (rays, segments);
    ``length`` the truncated ray length or segment length; ``radius`` and
    ``angular_span`` apply to arcs/circles.  ``orientation`` is +1 to traverse
    the intrinsic parametrization forwards, -1 to run it backwards.
    """

    kind: str
    anchor: complex = 0.0
    direction: complex = 1.0
    length: float = 0.0
    radius: float = 0.0
    angular_span: tuple = (0.0, 2 * np.pi)
    orientation: int = 1

    def __post_init__(self):
        if self.kind in (RAY, SEGMENT):
            if abs(self.direction) == 0 or self.length <= 0:
                raise InvalidGeometryError(
                    f"{self.kind} needs a nonzero direction and positive length"
                )
            if self.kind == RAY and abs(abs(self.direction) - 1.0) > 1e-12:
                raise InvalidGeometryError("infinite-ray direction must be unit length")
        elif self.kind in (ARC, CIRCLE):
            if self.radius <= 0:
                raise InvalidGeometryError(f"{self.kind} needs a positive radius")
            if self.kind == ARC and self.angular_span[0] == self.angular_span[1]:
                raise InvalidGeometryError("circular-arc needs a nonempty angular span")
        else:
            raise InvalidGeometryError(f"unknown segment kind {self.kind!r}")
        if self.orientation not in (-1, 1):
            raise InvalidGeometryError("orientation must be +1 or -1")

    def _intrinsic(self, v):
        """Point and derivative of the intrinsic map at parameter(s) v."""
        v = np.asarray(v, dtype=float)
        if self.kind == RAY:
            # quadratic substitution: clusters nodes near the anchor
            z = self.anchor + self.direction * self.length * v**2
            dz = self.direction * 2.0 * self.length * v
        elif self.kind == SEGMENT:
            z = self.anchor + self.direction * self.length * v
            dz = np.broadcast_to(self.direction * self.length, v.shape).copy()
        elif self.kind == ARC:
            th0, th1 = self.angular_span
            th = th0 + (th1 - th0) * v
            e = np.exp(1j * th)
            z = self.anchor + self.radius * e
            dz = 1j * (th1 - th0) * self.radius * e
        else:  # CIRCLE
            th = 2 * np.pi * v
            e = np.exp(1j * th)
            z = self.anchor + self.radius * e
            dz = 2j * np.pi * self.radius * e
        return z, dz

    def parametrize(self, u):
        """Traversal map u -> (z, dz/du) for u in [0, 1].

        With orientation -1 the traversal runs the intrinsic parametrization
        backwards, so u = 0 is the segment's far end.
        """
        u = np.asarray(u, dtype=float)
        if np.any(u < -1e-12) or np.any(u > 1 + 1e-12):
            raise ValueError("parameter u must lie in [0, 1]")
        if self.orientation > 0:
            return self._intrinsic(u)
        z, dz = self._intrinsic(1.0 - u)
        return z, -dz

    @property
    def start(self):
        z, _ = self.parametrize(0.0)
        return complex(z)

    @property
    def end(self):
        z, _ = self.parametrize(1.0)
        return complex(z)

    def reversed(self):
        return replace(self, orientation=-self.orientation)


def parametrize(segment, u):
    """Functional form of :meth:`ContourSegment.parametrize`."""
    return segment.parametrize(u)


@dataclass(frozen=True)
class Contour:
    """Ordered, oriented contour with a region tag.

    ``truncation_radius`` records where infinite rays were cut; it is the
    knob the tail monitor doubles when a truncated tail is too large.
    """

    segments: tuple
    region: str
    truncation_radius: float = DEFAULT_TRUNCATION

    def __post_init__(self):
        if not self.segments:
            raise InvalidGeometryError("contour needs at least one segment")

    def max_radius(self):
        return max(
            max(abs(s.start), abs(s.end)) + (s.radius if s.kind in (ARC, CIRCLE) else 0)
            for s in self.segments
        )


def _check_connected(segments, where):
    for a, b in zip(segments[:-1], segments[1:]):
        if abs(a.end - b.start) > 1e-9 * max(1.0, abs(a.end)):
            raise InvalidGeometryError(f"{where}: consecutive segments do not meet")


def real_line(truncation=DEFAULT_TRUNCATION):
    """The real axis from -truncation to +truncation, increasing."""
    if truncation <= 0:
        raise InvalidGeometryError("truncation must be positive")
    left = ContourSegment(RAY, anchor=0.0, direction=-1.0, length=truncation, orientation=-1)
    right = ContourSegment(RAY, anchor=0.0, direction=1.0, length=truncation, orientation=1)
    segs = (left, right)
    _check_connected(segs, "real_line")
    return Contour(segs, REAL_LINE, truncation)


def boundary_D_plus(truncation=DEFAULT_TRUNCATION):
    """Positively oriented boundary of the sector pi/3 < arg(lam) < 2pi/3.

    Traversal: down the arg = 2pi/3 ray from the truncation radius to 0, then
    out along the arg = pi/3 ray; the sector lies on the left.
    """
    if truncation <= 0:
        raise InvalidGeometryError("truncation must be positive")
    d_in = np.exp(2j * np.pi / 3)
    d_out = np.exp(1j * np.pi / 3)
    inward = ContourSegment(RAY, anchor=0.0, direction=d_in, length=truncation, orientation=-1)
    outward = ContourSegment(RAY, anchor=0.0, direction=d_out, length=truncation, orientation=1)
    segs = (inward, outward)
    _check_connected(segs, "boundary_D_plus")
    return Contour(segs, BOUNDARY_D_PLUS, truncation)


def boundary_D_rho(half_plane, rho, truncation=DEFAULT_TRUNCATION):
    """Positively oriented boundary of {lam in C^(+-): Re lam^2 < 0, |lam| > rho}.

    ``half_plane`` is +1 for the upper region, -1 for the lower.  The region
    (outside the arc, between the rays) lies on the left of the traversal.
    """
    if rho <= 0:
        raise InvalidGeometryError("rho must be positive")
    if truncation <= rho:
        raise InvalidGeometryError("truncation must exceed rho")
    length = truncation - rho
    if half_plane > 0:
        a_in, a_out = 3 * np.pi / 4, np.pi / 4
        span = (3 * np.pi / 4, np.pi / 4)  # arc traversed clockwise
        region = BOUNDARY_D_RHO_PLUS
    else:
        a_in, a_out = -np.pi / 4, -3 * np.pi / 4
        span = (-np.pi / 4, -3 * np.pi / 4)
        region = BOUNDARY_D_RHO_MINUS
    d_in = np.exp(1j * a_in)
    d_out = np.exp(1j * a_out)
    inward = ContourSegment(RAY, anchor=rho * d_in, direction=d_in, length=length, orientation=-1)
    arc = ContourSegment(ARC, anchor=0.0, radius=rho, angular_span=span, orientation=1)
    outward = ContourSegment(RAY, anchor=rho * d_out, direction=d_out, length=length, orientation=1)
    segs = (inward, arc, outward)
    _check_connected(segs, "boundary_D_rho")
    return Contour(segs, region, truncation)


def circle_C(radius=0.5):
    """Counterclockwise circle centred at lam = i.

    The radius must be below 1 so the circle encloses i while staying clear
    of the kernel singularities at 0 and the symbol pole at -i.
    """
    if not 0 < radius < 1:
        raise InvalidGeometryError("circle radius must lie in (0, 1)")
    seg = ContourSegment(CIRCLE, anchor=1j, radius=radius, orientation=1)
    return Contour((seg,), CIRCLE_C, radius)


def with_truncation(contour, truncation):
    """Rebuild a contour family at a different truncation radius."""
    if contour.region == REAL_LINE:
        return real_line(truncation)
    if contour.region == BOUNDARY_D_PLUS:
        return boundary_D_plus(truncation)
    if contour.region == BOUNDARY_D_RHO_PLUS:
        rho = contour.segments[1].radius
        return boundary_D_rho(+1, rho, truncation)
    if contour.region == BOUNDARY_D_RHO_MINUS:
        rho = contour.segments[1].radius
        return boundary_D_rho(-1, rho, truncation)
    return contour  # CIRCLE_C has no truncation


def in_D_plus(lam):
    """Membership in the open sector pi/3 < arg(lam) < 2pi/3."""
    a = np.angle(lam)
    return (np.pi / 3 < a) & (a < 2 * np.pi / 3)


def in_D_rho(lam, half_plane, rho):
    """Membership in {lam in C^(+-): Re(lam^2) < 0 and |lam| > rho}."""
    lam = np.asarray(lam, dtype=complex)
    half = lam.imag > 0 if half_plane > 0 else lam.imag < 0
    return half & (np.real(lam**2) < 0) & (np.abs(lam) > rho)
