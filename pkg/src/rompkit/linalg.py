"""Dense real linear algebra used by the recovery loop.

Matrices are 2-D float64 numpy arrays (row-major), vectors are 1-D float64
arrays, and index sets are strictly increasing 1-D int64 arrays.  Everything
here is a pure function; nothing mutates its inputs.
"""

import numpy as np
import scipy.linalg

__all__ = [
    "RankDeficiencyError",
    "as_matrix",
    "as_vector",
    "index_set",
    "mat_vec",
    "adjoint_mat_vec",
    "restrict_columns",
    "embed_coefficients",
    "least_squares",
]

# A least-squares system counts as numerically rank-deficient when the
# smallest |R[i,i]| of its QR factor falls below this ratio times the largest.
RANK_CUTOFF_RATIO = 1e-10


class RankDeficiencyError(ValueError):
    """Least-squares matrix is numerically rank-deficient.

    Carries the detected numerical rank and, when raised from inside a
    recovery run, the index set that produced the offending column submatrix.
    """

    def __init__(self, numerical_rank, shape, support=None):
        self.numerical_rank = int(numerical_rank)
        self.shape = tuple(shape)
        self.support = support
        msg = (
            f"{self.shape[0]}x{self.shape[1]} least-squares matrix has "
            f"numerical rank {self.numerical_rank}"
        )
        if support is not None:
            msg += f" on index set of size {len(support)}"
        super().__init__(msg)


def as_matrix(m):
    """Coerce to a 2-D float64 array, rejecting NaN/Inf entries."""
    a = np.asarray(m, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"expected a 2-D matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    return a


def as_vector(v):
    """Coerce to a 1-D float64 array, rejecting NaN/Inf entries."""
    a = np.asarray(v, dtype=np.float64)
    if a.ndim != 1 or a.shape[0] < 1:
        raise ValueError(f"expected a 1-D vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("vector entries must be finite")
    return a


def index_set(indices, dim=None):
    """Validate and sort a collection of distinct column indices.

    Returns a strictly increasing int64 array.  Duplicates and (when ``dim``
    is given) out-of-range indices raise ``ValueError``.
    """
    idx = np.sort(np.asarray(list(indices) if not isinstance(indices, np.ndarray) else indices, dtype=np.int64))
    if idx.ndim != 1:
        raise ValueError("index set must be one-dimensional")
    if idx.size > 1 and np.any(np.diff(idx) == 0):
        raise ValueError("index set contains duplicate indices")
    if idx.size and idx[0] < 0:
        raise ValueError("index set contains negative indices")
    if dim is not None and idx.size and idx[-1] >= dim:
        raise ValueError(f"index {int(idx[-1])} out of range for dimension {dim}")
    return idx


def mat_vec(matrix, vec):
    """Matrix-vector product ``M @ z`` with a dimension check."""
    m = np.asarray(matrix)
    z = np.asarray(vec)
    if z.shape[0] != m.shape[1]:
        raise ValueError(f"dimension mismatch: matrix has {m.shape[1]} columns, vector has length {z.shape[0]}")
    return m @ z


def adjoint_mat_vec(matrix, vec):
    """Transpose product ``M.T @ z`` with a dimension check."""
    m = np.asarray(matrix)
    z = np.asarray(vec)
    if z.shape[0] != m.shape[0]:
        raise ValueError(f"dimension mismatch: matrix has {m.shape[0]} rows, vector has length {z.shape[0]}")
    return m.T @ z


def restrict_columns(matrix, indices):
    """Column submatrix ``M[:, I]`` in the (sorted) order of the index set."""
    m = np.asarray(matrix)
    idx = index_set(indices, dim=m.shape[1])
    if idx.size == 0:
        raise ValueError("cannot restrict to an empty index set")
    return m[:, idx]


def embed_coefficients(values, indices, dim):
    """Zero-padded vector in R^dim carrying ``values`` on the index set."""
    idx = index_set(indices, dim=dim)
    vals = np.asarray(values, dtype=np.float64)
    if vals.shape[0] != idx.shape[0]:
        raise ValueError("coefficient count does not match index set size")
    out = np.zeros(dim)
    out[idx] = vals
    return out


def least_squares(a, x):
    """Minimize ``||x - A @ y||_2`` for a full-column-rank overdetermined A.

    Householder QR without column pivoting.  The residual of a successful
    solve is orthogonal to the columns of ``A`` up to roundoff.  Raises
    :class:`RankDeficiencyError` (carrying the detected numerical rank) when
    the smallest diagonal magnitude of R drops below ``RANK_CUTOFF_RATIO``
    times the largest, or when A has more columns than rows.
    """
    a = as_matrix(a)
    x = as_vector(x)
    if x.shape[0] != a.shape[0]:
        raise ValueError(f"dimension mismatch: matrix has {a.shape[0]} rows, vector has length {x.shape[0]}")
    q, r = np.linalg.qr(a, mode="reduced")
    diag = np.abs(np.diagonal(r))
    dmax = float(diag.max()) if diag.size else 0.0
    rank = int(np.count_nonzero(diag >= RANK_CUTOFF_RATIO * dmax)) if dmax > 0.0 else 0
    if rank < a.shape[1]:
        raise RankDeficiencyError(rank, a.shape)
    return scipy.linalg.solve_triangular(r, q.T @ x, lower=False)
