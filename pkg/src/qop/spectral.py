"""Spectra of quaternionic operators via the complex adjoint embedding.

Right eigenvalues of an operator fill out similarity spheres; we report
each sphere by its upper-half-plane representative w + |v| i, the
standard eigenvalue.  On the embedded side the spectrum of chi(T) is
closed under conjugation and every standard eigenvalue shows up as a
conjugate pair, so pairing the complex spectrum and collapsing each pair
recovers the quaternionic data.

Self-adjoint operators get a full eigensystem: real eigenvalues with a
right-orthonormal basis of eigenvectors, pulled back cluster by cluster
from the embedded eigenvectors.  Scalar functions of the operator are
evaluated on the embedded side and unembedded afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import _eig
from .errors import DomainError, PreconditionError, ShapeError, StructureError
from .linalg import QMatrix, QVector, embed_chi, inner, unembed_chi
from .quaternion import Quaternion

PAIR_TOL = 1e-8
CLUSTER_TOL = 1e-8
MERGE_TOL = 1e-6
_GS_ACCEPT = 1e-6


def _unembed_vector(v: np.ndarray) -> QVector:
    """Pull a C^{2n} column back through the vector embedding [a; -conj(b)]."""
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    n = v.shape[0] // 2
    alpha, beta = v[:n], v[n:]
    comps = np.stack([alpha.real, alpha.imag, -beta.real, beta.imag], axis=1)
    return QVector(comps)


def _embed_vector(u: QVector) -> np.ndarray:
    c = u.to_array()
    return np.concatenate([c[:, 0] + 1j * c[:, 1], -c[:, 2] + 1j * c[:, 3]])


def _require_square(t: QMatrix) -> int:
    if not t.is_square():
        raise ShapeError(f"square operator required, got {t.shape}")
    return t.rows


@dataclass(frozen=True)
class HermitianEigensystem:
    """Diagonalization A = V diag(w) V* of a self-adjoint operator.

    ``eigenvalues`` ascend and ``vectors`` has right-orthonormal columns.
    The embedded eigendecomposition is kept alongside so that scalar
    functions of A can be formed without re-diagonalizing.
    """

    eigenvalues: tuple[float, ...]
    vectors: QMatrix
    _w2: np.ndarray
    _v2: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def eigenvalue_scale(self) -> float:
        return max(abs(w) for w in self.eigenvalues)

    def apply(self, f: Callable[[np.ndarray], np.ndarray]) -> QMatrix:
        """Evaluate a real scalar function of the operator, f(A).

        ``f`` must accept a float ndarray and return one of the same shape.
        """
        fw = np.asarray(f(self._w2), dtype=np.float64)
        if fw.shape != self._w2.shape or not np.all(np.isfinite(fw)):
            raise DomainError("scalar function must return finite reals on the spectrum")
        m = (self._v2 * fw[None, :]) @ self._v2.conj().T
        m = 0.5 * (m + m.conj().T)
        return unembed_chi(m, tol=1e-6)

    def reconstruct(self) -> QMatrix:
        return self.apply(lambda w: w)

    def power_psd(self, p: float, *, clamp_tol: float = 1e-8) -> QMatrix:
        """Fractional power A^p, p >= 0, of a positive semidefinite operator.

        Eigenvalues in [-clamp_tol * ||A||, 0) are treated as roundoff and
        clamped to zero; anything below that is a genuine negativity and a
        domain error.  Small positive eigenvalues are kept as they are: in
        graded products like B^r A^p B^r they can sit many orders below the
        top eigenvalue and still carry signal, so no positive floor is safe
        here.  The convention 0^0 = 1 makes A^0 the identity on the full
        space, kernel included.
        """
        if p < 0.0:
            raise DomainError(f"exponent must be nonnegative, got {p}")
        w = self._w2
        floor = clamp_tol * float(np.abs(w).max(initial=0.0))
        if float(w.min()) < -floor:
            raise DomainError(
                f"operator is not positive semidefinite (min eigenvalue {w.min():.3e})")
        wc = np.maximum(w, 0.0)
        if p == 0.0:
            return self.apply(lambda v: np.ones_like(v))
        def f(_: np.ndarray) -> np.ndarray:
            out = np.zeros_like(wc)
            pos = wc > 0.0
            out[pos] = wc[pos] ** p
            return out
        return self.apply(f)


def _pair_real(w: np.ndarray, *, pair_tol: float) -> np.ndarray:
    """Collapse an ascending real spectrum of even length into midpoints."""
    scale = max(1.0, float(np.abs(w).max(initial=0.0)))
    a, b = w[0::2], w[1::2]
    gaps = np.abs(b - a)
    if gaps.size and float(gaps.max()) > pair_tol * scale:
        raise StructureError(
            f"eigenvalue pairing failure (worst gap {gaps.max():.3e} at scale {scale:.3e})")
    return 0.5 * (a + b)


def _gram_schmidt_accept(candidates: list[QVector], need: int) -> list[QVector]:
    accepted: list[QVector] = []
    for cand in candidates:
        r = cand
        for z in accepted:
            r = r - z * inner(z, r)
        nr = r.norm()
        if nr > _GS_ACCEPT:
            accepted.append(r * (1.0 / nr))
        if len(accepted) == need:
            break
    if len(accepted) != need:
        raise StructureError(
            f"eigenvector recovery produced {len(accepted)} of {need} vectors")
    return accepted


def eigh_q(a: QMatrix, *, herm_tol: float = 1e-8,
           pair_tol: float = PAIR_TOL) -> HermitianEigensystem:
    """Eigensystem of a self-adjoint operator.

    The embedded matrix is diagonalized, the doubled spectrum is collapsed
    pair by pair, and one right-orthonormal eigenvector per pair is pulled
    back, working cluster by cluster so repeated eigenvalues come out with
    a full orthonormal block.
    """
    n = _require_square(a)
    dev = (a - a.H).frobenius()
    if dev > herm_tol * max(1.0, a.frobenius()):
        raise PreconditionError(f"operator is not self-adjoint (deviation {dev:.3e})")
    m = embed_chi(a)
    m = 0.5 * (m + m.conj().T)
    w2, v2 = _eig.eigh_jacobi(m)
    mids = _pair_real(w2, pair_tol=pair_tol)

    scale = max(1.0, float(np.abs(mids).max(initial=0.0)))
    clusters: list[list[int]] = [[0]]
    for t in range(1, n):
        if mids[t] - mids[clusters[-1][-1]] <= CLUSTER_TOL * scale:
            clusters[-1].append(t)
        else:
            clusters.append([t])

    eigenvalues: list[float] = []
    columns: list[QVector] = []
    for cluster in clusters:
        lam = float(np.mean([mids[t] for t in cluster]))
        candidates = [_unembed_vector(v2[:, 2 * t + s]) for t in cluster for s in (0, 1)]
        vecs = _gram_schmidt_accept(candidates, len(cluster))
        eigenvalues.extend([lam] * len(cluster))
        columns.extend(vecs)

    return HermitianEigensystem(
        eigenvalues=tuple(eigenvalues),
        vectors=QMatrix.from_columns(columns),
        _w2=np.repeat(mids, 2),
        _v2=v2,
    )


def min_eigenvalue(a: QMatrix, *, herm_tol: float = 1e-8) -> float:
    """Smallest eigenvalue of a self-adjoint operator, no vectors formed."""
    n = _require_square(a)
    dev = (a - a.H).frobenius()
    if dev > herm_tol * max(1.0, a.frobenius()):
        raise PreconditionError(f"operator is not self-adjoint (deviation {dev:.3e})")
    m = embed_chi(a)
    w, _ = _eig.eigh_jacobi(0.5 * (m + m.conj().T), want_vectors=False)
    return float(w[0])


def standard_eigenvalues(t: QMatrix, *, pair_tol: float = PAIR_TOL) -> tuple[complex, ...]:
    """The n standard (upper half-plane) eigenvalues, repeats included.

    Computed from the embedded spectrum: fold every complex eigenvalue into
    the closed upper half-plane, sort, and collapse adjacent pairs.
    """
    n = _require_square(t)
    vals = _eig.eig_qr(embed_chi(t))
    folded = np.where(vals.imag < 0.0, np.conj(vals), vals)
    order = np.lexsort((folded.imag, folded.real))
    folded = folded[order]
    scale = max(1.0, float(np.abs(folded).max(initial=0.0)))
    a, b = folded[0::2], folded[1::2]
    gaps = np.abs(b - a)
    if gaps.size and float(gaps.max()) > pair_tol * scale:
        raise StructureError(
            f"conjugate pairing failure (worst gap {gaps.max():.3e} at scale {scale:.3e})")
    mids = 0.5 * (a + b)
    reps = tuple(complex(z.real, abs(z.imag)) for z in mids)
    assert len(reps) == n
    return reps


@dataclass(frozen=True)
class SphericalSpectrum:
    """Similarity classes of right eigenvalues and the spectral radius."""

    classes: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    radius: float


def spherical_spectrum(t: QMatrix, *, merge_tol: float = MERGE_TOL) -> SphericalSpectrum:
    """Distinct eigenvalue spheres of an operator, one representative each."""
    reps = standard_eigenvalues(t)
    scale = max(1.0, max(abs(z) for z in reps))
    classes: list[list[complex]] = [[reps[0]]]
    for z in reps[1:]:
        if abs(z - classes[-1][-1]) <= merge_tol * scale:
            classes[-1].append(z)
        else:
            classes.append([z])
    centers = tuple(complex(np.mean([z.real for z in c]), np.mean([z.imag for z in c]))
                    for c in classes)
    mult = tuple(len(c) for c in classes)
    radius = max(abs(z) for z in centers)
    return SphericalSpectrum(classes=centers, multiplicities=mult, radius=radius)


def delta_q(t: QMatrix, q: Quaternion) -> QMatrix:
    """The sphere polynomial T^2 - T (q + conj q) + I |q|^2 at q."""
    n = _require_square(t)
    return t @ t - t * (2.0 * q.w) + QMatrix.identity(n) * q.norm_squared()


def _sigma_min(a: QMatrix) -> float:
    gram = a.H @ a
    m = embed_chi(gram)
    w, _ = _eig.eigh_jacobi(0.5 * (m + m.conj().T), want_vectors=False)
    return float(np.sqrt(max(float(w[0]), 0.0)))


@dataclass(frozen=True)
class PointSpectrumCheck:
    """One eigenvalue sphere with its verified-kernel evidence."""

    representative: complex
    kernel_gap: float
    verified: bool


def verify_point_spectrum(t: QMatrix, *, tol: float = 1e-6) -> tuple[PointSpectrumCheck, ...]:
    """Confirm each spectral sphere carries kernel vectors for its Delta.

    ``kernel_gap`` is the smallest singular value of Delta_c divided by its
    size; ``verified`` means the gap clears ``tol``.  On a finite
    dimensional space every class should verify.
    """
    spec = spherical_spectrum(t)
    checks = []
    for c in spec.classes:
        d = delta_q(t, Quaternion(c.real, c.imag, 0.0, 0.0))
        gap = _sigma_min(d) / max(1.0, d.frobenius())
        checks.append(PointSpectrumCheck(representative=c, kernel_gap=gap,
                                         verified=gap <= tol))
    return tuple(checks)


def spherical_point_spectrum(t: QMatrix, *, tol: float = 1e-6,
                             merge_tol: float = MERGE_TOL) -> SphericalSpectrum:
    """Eigenvalue spheres with the point-spectrum property verified.

    Each reported class must make its sphere polynomial singular; a class
    failing that check means the solver and the kernel test disagree, which
    is reported as a structure error rather than silently dropped.
    """
    spec = spherical_spectrum(t, merge_tol=merge_tol)
    for c in spec.classes:
        d = delta_q(t, Quaternion(c.real, c.imag, 0.0, 0.0))
        gap = _sigma_min(d) / max(1.0, d.frobenius())
        if gap > tol:
            raise StructureError(
                f"class {c} reported but Delta has no kernel (gap {gap:.3e})")
    return spec


def kernel_basis(a: QMatrix, *, rtol: float = 1e-8) -> list[QVector]:
    """Right-orthonormal basis of ker A, possibly empty.

    Singular values at or below ``rtol`` times max(1, largest singular
    value) count as zero.
    """
    if a.rows < a.cols:
        raise ShapeError("kernel extraction expects rows >= cols")
    system = eigh_q(a.H @ a)
    sigma = np.sqrt(np.maximum(np.array(system.eigenvalues), 0.0))
    cutoff = rtol * max(1.0, float(sigma.max(initial=0.0)))
    return [system.vectors.column(i) for i in range(system.dim) if sigma[i] <= cutoff]


def spherical_eigenspace(t: QMatrix, rep: complex, *, count: int | None = None,
                         rtol: float = 1e-6) -> list[QVector]:
    """Right-orthonormal basis of ker Delta_rep, the eigenspace of a sphere.

    For an operator that is diagonalizable on the sphere of ``rep`` this is
    exactly the span of the eigenvectors with eigenvalue in that sphere;
    defective spheres contribute their full polynomial kernel.
    """
    q = Quaternion(rep.real, rep.imag, 0.0, 0.0)
    vecs = kernel_basis(delta_q(t, q), rtol=rtol)
    if count is not None and len(vecs) < count:
        raise StructureError(f"kernel holds {len(vecs)} vectors, expected {count}")
    return vecs if count is None else vecs[:count]


def fun_calc(t: QMatrix, f: Callable[[np.ndarray], np.ndarray], *,
             system: HermitianEigensystem | None = None) -> QMatrix:
    """Continuous functional calculus f(T) for self-adjoint T.

    Pass a precomputed ``system`` to evaluate several functions of the same
    operator without repeating the diagonalization.
    """
    return (eigh_q(t) if system is None else system).apply(f)


def power_psd(t: QMatrix, p: float, *, clamp_tol: float = 1e-8,
              system: HermitianEigensystem | None = None) -> QMatrix:
    """T^p for positive semidefinite T and p >= 0; T^0 = I."""
    return (eigh_q(t) if system is None else system).power_psd(p, clamp_tol=clamp_tol)


def is_psd(t: QMatrix, tol: float = 1e-8) -> tuple[bool, float]:
    """Positive semidefiniteness test defining the operator order.

    Returns (flag, margin) with margin the smallest eigenvalue; the flag is
    true when margin >= -tol * max(1, ||T||).
    """
    lo, hi = rayleigh_bounds(t)
    opnorm = max(abs(lo), abs(hi))
    return lo >= -tol * max(1.0, opnorm), lo


def rayleigh_bounds(t: QMatrix, *, herm_tol: float = 1e-8) -> tuple[float, float]:
    """Extreme eigenvalues (m, M) of a self-adjoint operator.

    Every Rayleigh quotient of a unit vector lies in [m, M].
    """
    n = _require_square(t)
    dev = (t - t.H).frobenius()
    if dev > herm_tol * max(1.0, t.frobenius()):
        raise PreconditionError(f"operator is not self-adjoint (deviation {dev:.3e})")
    m = embed_chi(t)
    w, _ = _eig.eigh_jacobi(0.5 * (m + m.conj().T), want_vectors=False)
    return float(w[0]), float(w[-1])
