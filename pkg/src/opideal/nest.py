"""Flags of nested subspaces and triangular truncation relative to partitions.

A flag is an orthonormal basis adapted to a chain of subspaces together
with the chain's dimensions; a partition is a finite subchain.  Relative
to a partition every square matrix splits exactly into its block-diagonal,
strictly-block-upper and strictly-block-lower truncations, computed here
as entry masks in the adapted basis.  In finite dimension the triangular
"integral" is simply the truncation at the finest partition the flag
supports.
"""

from __future__ import annotations

import numpy as np

from .errors import InputError
from .symfunc import SymNormFunc, phi_norm
from .utils import as_matrix, crandn, dagger, frob, opnorm

__all__ = [
    "Flag",
    "Partition",
    "project",
    "truncate_diag",
    "truncate_upper",
    "truncate_lower",
    "triangular_integral",
    "refinement_identities_check",
    "is_in_nest_algebra",
    "truncation_norm_experiment",
]

_UNITARY_TOL = 1e-12


class Flag:
    """An orthonormal flag: adapting unitary columns plus nested dimensions."""

    __slots__ = ("basis", "dims", "n", "is_standard")

    def __init__(self, basis, dims):
        basis = as_matrix(basis, square=True, name="flag basis")
        n = basis.shape[0]
        err = frob(dagger(basis) @ basis - np.eye(n))
        if err > _UNITARY_TOL * max(1.0, np.sqrt(n)):
            raise InputError(f"flag basis is not unitary (residual {err:.2e})")
        dims = tuple(int(d) for d in dims)
        if not dims or dims[0] < 1 or dims[-1] != n or any(
                b <= a for a, b in zip(dims, dims[1:])):
            raise InputError(
                "flag dims must be strictly increasing positive integers ending at n")
        self.basis = basis
        self.basis.flags.writeable = False
        self.dims = dims
        self.n = n
        self.is_standard = bool(np.array_equal(basis, np.eye(n)))

    @classmethod
    def standard(cls, n: int, dims=None) -> "Flag":
        """The coordinate flag; by default maximal (every dimension a cut)."""
        if dims is None:
            dims = range(1, n + 1)
        return cls(np.eye(n, dtype=complex), dims)

    def __repr__(self) -> str:
        return f"Flag(n={self.n}, dims={self.dims}, standard={self.is_standard})"


class Partition:
    """A finite subchain of a flag's dimensions, always containing n."""

    __slots__ = ("flag", "cuts")

    def __init__(self, flag: Flag, cuts):
        cuts = tuple(sorted({int(c) for c in cuts}))
        if not cuts:
            raise InputError("partition needs at least one cut")
        bad = [c for c in cuts if c not in flag.dims and c != 0]
        if bad:
            raise InputError(f"cuts {bad} are not dimensions of the flag")
        cuts = tuple(c for c in cuts if c != 0)
        if not cuts or cuts[-1] != flag.n:
            raise InputError("partition must contain the full dimension n")
        self.flag = flag
        self.cuts = cuts

    @classmethod
    def maximal(cls, flag: Flag) -> "Partition":
        return cls(flag, flag.dims)

    @property
    def bounds(self):
        return (0,) + self.cuts

    @property
    def block_count(self) -> int:
        return len(self.cuts)

    def is_subchain_of(self, other: "Partition") -> bool:
        return self.flag is other.flag and set(self.cuts) <= set(other.cuts)

    def __repr__(self) -> str:
        return f"Partition(cuts={self.cuts})"


def project(flag: Flag, k: int) -> np.ndarray:
    """Orthogonal projection onto the first k flag directions."""
    if k == 0:
        return np.zeros((flag.n, flag.n), dtype=complex)
    if k not in flag.dims:
        raise InputError(f"k={k} is not a cut dimension of the flag")
    if flag.is_standard:
        p = np.zeros((flag.n, flag.n), dtype=complex)
        p[np.arange(k), np.arange(k)] = 1.0
        return p
    b = flag.basis[:, :k]
    return b @ dagger(b)


def _block_index(partition: Partition) -> np.ndarray:
    idx = np.empty(partition.flag.n, dtype=int)
    bounds = partition.bounds
    for i in range(partition.block_count):
        idx[bounds[i]:bounds[i + 1]] = i
    return idx


def _truncate(partition: Partition, x, cmp: str) -> np.ndarray:
    x = as_matrix(x, square=True)
    flag = partition.flag
    if x.shape[0] != flag.n:
        raise InputError(f"matrix dimension {x.shape[0]} does not match flag n={flag.n}")
    idx = _block_index(partition)
    if cmp == "diag":
        mask = idx[:, None] == idx[None, :]
    elif cmp == "upper":
        mask = idx[:, None] < idx[None, :]
    else:
        mask = idx[:, None] > idx[None, :]
    if flag.is_standard:
        return np.where(mask, x, 0.0)
    y = dagger(flag.basis) @ x @ flag.basis
    return flag.basis @ np.where(mask, y, 0.0) @ dagger(flag.basis)


def truncate_diag(partition: Partition, x) -> np.ndarray:
    """Block-diagonal truncation relative to the partition."""
    return _truncate(partition, x, "diag")


def truncate_upper(partition: Partition, x) -> np.ndarray:
    """Strictly-block-upper truncation relative to the partition."""
    return _truncate(partition, x, "upper")


def truncate_lower(partition: Partition, x) -> np.ndarray:
    """Strictly-block-lower truncation relative to the partition."""
    return _truncate(partition, x, "lower")


def triangular_integral(flag: Flag, x):
    """The (lower, diagonal, upper) parts at the finest partition of the flag."""
    p = Partition.maximal(flag)
    return truncate_lower(p, x), truncate_diag(p, x), truncate_upper(p, x)


def refinement_identities_check(p_part: Partition, q_part: Partition, x) -> dict:
    """Max deviation of the composition identities for a coarser/finer pair.

    For p coarser than q the upper and lower truncations compose to the
    coarser one in either order, while the diagonal truncations compose to
    the finer one.
    """
    if not p_part.is_subchain_of(q_part):
        raise InputError("first partition must be a subchain of the second")
    x = as_matrix(x, square=True)
    report = {}
    for name, op in (("diag", truncate_diag),
                     ("upper", truncate_upper),
                     ("lower", truncate_lower)):
        px, qx = op(p_part, x), op(q_part, x)
        target = qx if name == "diag" else px
        report[f"{name}_pq"] = frob(op(p_part, qx) - target)
        report[f"{name}_qp"] = frob(op(q_part, px) - target)
    return report


def is_in_nest_algebra(b, flag: Flag, tol: float = 1e-12) -> bool:
    """Whether b leaves every flag subspace invariant: b e = e b e for all cuts."""
    b = as_matrix(b, square=True)
    if b.shape[0] != flag.n:
        raise InputError(f"matrix dimension {b.shape[0]} does not match flag n={flag.n}")
    for k in flag.dims:
        e = project(flag, k)
        be = b @ e
        if opnorm(be - e @ be) > tol:
            return False
    return True


def _experiment_sample(rng: np.random.Generator, n: int, trial: int) -> np.ndarray:
    # Cycle three matrix families: dense Gaussian, complex rank-one, and
    # flat positive rank-one.  The rank-one families witness the growth of
    # the trace-norm truncation ratio with dimension.
    kind = trial % 3
    if kind == 0:
        return crandn(rng, n, n)
    if kind == 1:
        return np.outer(crandn(rng, n), crandn(rng, n).conj())
    u = rng.uniform(0.5, 1.0, n)
    v = rng.uniform(0.5, 1.0, n)
    return np.outer(u, v).astype(complex)


def _trial_ratio(phi: SymNormFunc, part: Partition, n: int, seed: int,
                 trial: int) -> float:
    rng = np.random.default_rng([seed, n, trial])
    x = _experiment_sample(rng, n, trial)
    denom = phi_norm(phi, x)
    if denom <= 0.0:
        return 0.0
    return phi_norm(phi, truncate_upper(part, x)) / denom


def truncation_norm_experiment(phi: SymNormFunc, n_list, trials: int,
                               seed: int, jobs: int = 1):
    """Measured max of ||upper(X)|| / ||X|| over seeded samples, per size.

    Each trial's generator is derived from (seed, n, trial) and the trial
    maximum is order-independent, so the result does not depend on
    scheduling; jobs > 1 runs trials in a thread pool.
    """
    if trials < 1:
        raise InputError("trials must be >= 1")
    sizes = [int(n) for n in n_list]
    if any(n < 1 for n in sizes):
        raise InputError("sizes must be positive")
    rows = []
    if jobs > 1:
        from concurrent.futures import ThreadPoolExecutor
        pool = ThreadPoolExecutor(max_workers=jobs)
    else:
        pool = None
    try:
        for n in sizes:
            part = Partition.maximal(Flag.standard(n))
            if pool is not None:
                ratios = pool.map(
                    lambda t, n=n, part=part: _trial_ratio(phi, part, n, seed, t),
                    range(trials))
                rows.append((n, max(ratios)))
            else:
                rows.append((n, max(_trial_ratio(phi, part, n, seed, t)
                                    for t in range(trials))))
    finally:
        if pool is not None:
            pool.shutdown()
    return rows
