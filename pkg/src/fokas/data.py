"""Initial data families with closed-form derivatives.

The verification machinery needs exact boundary traces (for the remainder
functionals) and exact derivative data (to apply the spatial operator and to
generate the boundary coefficients of the large-lam expansion used by the
tail completion), so data are restricted to families closed under
differentiation:

* half line: p(x) exp(-a x) and p(x) exp(-a x^2) with polynomial p, a > 0;
* unit interval: polynomials and cosine combinations sum b_k cos(k pi x);
* finite linear combinations of the above on a common domain.

Every family evaluates derivatives of arbitrary order from explicit
recurrences; no numerical differentiation happens anywhere in the library.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import polynomial as P

HALFLINE = "halfline"
INTERVAL = "interval"


class InitialDatum:
    """Base class; subclasses provide _poly_for(k) style exact derivatives."""

    domain = HALFLINE
    decay_rate = None
    label = "datum"

    @property
    def is_real(self):
        """Real-valued data admit Hermitian symmetry of their transforms."""
        coeffs = getattr(self, "coeffs", getattr(self, "amps", None))
        if coeffs is None:
            return False
        return bool(np.all(np.isreal(coeffs)))

    def value(self, x):
        return self.derivative(x, 0)

    def derivative(self, x, k):
        raise NotImplementedError

    def differentiate(self, k=1):
        """The k-th derivative as a new datum of the same family."""
        raise NotImplementedError

    def boundary(self, endpoint, k):
        """phi^(k) at a domain endpoint (0, or 1 for interval data)."""
        return complex(np.asarray(self.derivative(np.asarray([endpoint]), k))[0])

    def tail_coefficients(self, m):
        """Coefficient blocks of the transform's large-lam expansion.

        F[phi](lam) = sum_k (phi^(k-1)(0) - e^{-i lam} phi^(k-1)(1)) / (i lam)^k
                      + O(lam^-m-1); interval data contribute both shifts.
        """
        c0 = np.array([self.boundary(0.0, k - 1) / 1j**k for k in range(1, m + 1)])
        out = {0.0: c0}
        if self.domain == INTERVAL:
            out[1.0] = np.array(
                [-self.boundary(1.0, k - 1) / 1j**k for k in range(1, m + 1)])
        return out

    def support_bound(self, tol=1e-18):
        """y beyond which |phi| stays below tol (half-line families)."""
        raise NotImplementedError

    def derivative_l1(self, k, n=4001):
        """Numeric L1 norm of phi^(k), used only inside error bounds."""
        hi = 1.0 if self.domain == INTERVAL else self.support_bound(1e-18)
        x = np.linspace(0.0, hi, n)
        v = np.abs(self.derivative(x, k))
        return float(np.trapezoid(v, x))

    def scaled(self, factor):
        return Combination([(factor, self)])


class PolyExp(InitialDatum):
    """p(x) exp(-a x) on the half line."""

    domain = HALFLINE

    def __init__(self, coeffs, a, label=None):
        if a <= 0:
            raise ValueError("decay parameter a must be positive")
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.a = float(a)
        self.decay_rate = float(a)
        self.label = label or f"poly*exp(-{a:g}x)"

    def _poly_for(self, k):
        c = self.coeffs
        for _ in range(k):
            c = P.polysub(P.polyder(c), self.a * c)
        return c

    def derivative(self, x, k):
        x = np.asarray(x, dtype=float)
        return P.polyval(x, self._poly_for(k)) * np.exp(-self.a * x)

    def differentiate(self, k=1):
        return PolyExp(self._poly_for(k), self.a, label=f"d{k}[{self.label}]")

    def support_bound(self, tol=1e-18):
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        y = max(5.0, -np.log(tol / scale) / self.a)
        for _ in range(60):
            if np.all(np.abs(self.value(np.asarray([y]))) < tol):
                return y
            y *= 1.25
        return y


class PolyGauss(InitialDatum):
    """p(x) exp(-a x^2) on the half line."""

    domain = HALFLINE

    def __init__(self, coeffs, a, label=None):
        if a <= 0:
            raise ValueError("decay parameter a must be positive")
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.a = float(a)
        # valid exponential envelope for x >= 1; truncation uses support_bound
        self.decay_rate = float(a)
        self.label = label or f"poly*exp(-{a:g}x^2)"

    def _poly_for(self, k):
        c = self.coeffs
        for _ in range(k):
            c = P.polysub(P.polyder(c), 2.0 * self.a * P.polymulx(c))
        return c

    def derivative(self, x, k):
        x = np.asarray(x, dtype=float)
        return P.polyval(x, self._poly_for(k)) * np.exp(-self.a * x**2)

    def differentiate(self, k=1):
        return PolyGauss(self._poly_for(k), self.a, label=f"d{k}[{self.label}]")

    def support_bound(self, tol=1e-18):
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        y = max(3.0, np.sqrt(-np.log(tol / scale) / self.a))
        for _ in range(60):
            if np.all(np.abs(self.value(np.asarray([y]))) < tol):
                return y
            y *= 1.25
        return y


class Poly(InitialDatum):
    """Polynomial on [0, 1]."""

    domain = INTERVAL

    def __init__(self, coeffs, label=None):
        self.coeffs = np.asarray(coeffs, dtype=complex)
        self.label = label or "poly"

    def derivative(self, x, k):
        x = np.asarray(x, dtype=float)
        return P.polyval(x, P.polyder(self.coeffs, k) if k else self.coeffs)

    def differentiate(self, k=1):
        return Poly(P.polyder(self.coeffs, k), label=f"d{k}[{self.label}]")


class Cosine(InitialDatum):
    """sum_k b_k cos(k pi x) on [0, 1]; b_0 is a constant term."""

    domain = INTERVAL

    def __init__(self, amps, label=None):
        self.amps = np.asarray(amps, dtype=complex)
        self.label = label or "cosine"

    def derivative(self, x, k):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for n, b in enumerate(self.amps):
            if b == 0:
                continue
            w = n * np.pi
            # d^k cos(w x) = w^k cos(w x + k pi/2)
            out += b * w**k * np.cos(w * x + k * np.pi / 2)
        return out

    def differentiate(self, k=1):
        # represent the derivative exactly with shifted-cosine bookkeeping
        return _DerivedDatum(self, k)


class Combination(InitialDatum):
    """Linear combination of data sharing a domain."""

    def __init__(self, parts, label=None):
        if not parts:
            raise ValueError("empty combination")
        self.parts = [(complex(w), d) for w, d in parts]
        domains = {d.domain for _, d in self.parts}
        if len(domains) != 1:
            raise ValueError("combination mixes spatial domains")
        self.domain = domains.pop()
        rates = [d.decay_rate for _, d in self.parts if d.decay_rate]
        self.decay_rate = min(rates) if rates else None
        self.label = label or " + ".join(f"{w:g}*{d.label}" for w, d in self.parts)

    @property
    def is_real(self):
        return all(w.imag == 0 and d.is_real for w, d in self.parts)

    def derivative(self, x, k):
        return sum(w * d.derivative(x, k) for w, d in self.parts)

    def differentiate(self, k=1):
        return Combination([(w, d.differentiate(k)) for w, d in self.parts],
                           label=f"d{k}[{self.label}]")

    def support_bound(self, tol=1e-18):
        return max(d.support_bound(tol) for _, d in self.parts)


class _DerivedDatum(InitialDatum):
    """k-th derivative view of another datum (used by Cosine)."""

    def __init__(self, base, shift):
        self.base = base
        self.shift = shift
        self.domain = base.domain
        self.decay_rate = base.decay_rate
        self.label = f"d{shift}[{base.label}]"

    @property
    def is_real(self):
        return self.base.is_real

    def derivative(self, x, k):
        return self.base.derivative(x, k + self.shift)

    def differentiate(self, k=1):
        return _DerivedDatum(self.base, self.shift + k)

    def support_bound(self, tol=1e-18):
        return self.base.support_bound(tol)


class SeparableSolution:
    """Manufactured q(x, s) = T(s) phi(x) used by the remainder certificates.

    ``T`` and its derivative are supplied in closed form so every boundary
    trace of q and q_t is exact.  q need not solve any PDE; the certificates
    only require q(., s) to satisfy the boundary/nonlocal conditions.
    """

    def __init__(self, phi, T=None, Tp=None, label=None):
        self.phi = phi
        self.T = T or (lambda s: np.exp(-s))
        self.Tp = Tp or (lambda s: -np.exp(-s))
        self.label = label or f"exp(-s)*({phi.label})"

    def trace(self, k, endpoint=0.0):
        """Spatial-derivative trace coefficient phi^(k)(endpoint)."""
        return self.phi.boundary(endpoint, k)


def make_datum(family, params):
    """Construct a datum from a config-style (family, parameter list) spec."""
    family = family.strip().lower()
    if family == "exp-monomial":
        n, a = int(params[0]), float(params[1])
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        return PolyExp(coeffs, a, label=f"x^{n} exp(-{a:g}x)")
    if family == "gauss-monomial":
        n, a = int(params[0]), float(params[1])
        coeffs = np.zeros(n + 1)
        coeffs[n] = 1.0
        return PolyGauss(coeffs, a, label=f"x^{n} exp(-{a:g}x^2)")
    if family == "poly":
        return Poly(np.asarray(params, dtype=float))
    if family == "cosine":
        return Cosine(np.asarray(params, dtype=float))
    raise ValueError(f"unknown datum family {family!r}")
