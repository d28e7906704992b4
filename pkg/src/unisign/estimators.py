"""scikit-learn style wrappers around the sign decomposition and the eigensolver.

Both estimators take a single square unitary matrix as ``X``.  Fitting runs
the decomposition; ``transform`` applies what was learned to another matrix.
"""
import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .eig import divide_and_conquer
from .linalg import as_matrix, check_unitary, ctranspose
from .sign import GAP_FLOOR, SIGN_METHODS, IterationConfig, backward_errors, run_sign

__all__ = ["UnitarySignDecomposition", "UnitaryEigensolver", "NotFittedError"]


def _config(est):
    return IterationConfig(n=est.n, delta=est.delta, max_iter=est.max_iter,
                           gap_floor=est.gap_floor)


def _check_method(method):
    if method not in SIGN_METHODS:
        raise ValueError(f"method must be one of {SIGN_METHODS}, got {method!r}")


class UnitarySignDecomposition(TransformerMixin, BaseEstimator):
    """Unitary sign decomposition ``A = S N`` as an estimator.

    Parameters
    ----------
    method : {"zolo", "pade", "newton", "direct"}, default="zolo"
    n : int, default=1
        Half-degree of the rational approximant (iteration order ``2n + 1``).
    delta : float, default=1e-16
        Convergence tolerance on the post-processed eigenvalues.
    max_iter : int, default=60
    gap_floor : float, default=1e-10
        Smallest ``pi/2 - theta`` handed to the approximants.

    Attributes
    ----------
    sign_ : ndarray
        Hermitian involution ``S``.
    n_factor_ : ndarray
        Unitary factor ``N = S A`` with spectrum in the right half-plane.
    n_iter_ : int
    theta_history_ : list of ArcAngle
    backward_errors_ : BackwardErrors
    warnings_ : list of str

    Examples
    --------
    >>> import numpy as np
    >>> est = UnitarySignDecomposition(n=2).fit(np.diag([1j ** 0.5, -1.0]))
    >>> np.round(est.sign_.real, 12)
    array([[ 1.,  0.],
           [ 0., -1.]])
    """

    def __init__(self, method="zolo", n=1, delta=1e-16, max_iter=60, gap_floor=GAP_FLOOR):
        self.method = method
        self.n = n
        self.delta = delta
        self.max_iter = max_iter
        self.gap_floor = gap_floor

    def fit(self, X, y=None):
        _check_method(self.method)
        a = check_unitary(X, "X")
        result = run_sign(self.method, a, _config(self))
        self.sign_ = result.s
        self.n_factor_ = result.n_factor
        self.n_iter_ = result.iterations
        self.theta_history_ = result.theta_history
        self.warnings_ = list(result.warnings)
        self.backward_errors_ = backward_errors(a, result.s, result.n_factor)
        self.n_features_in_ = a.shape[1]
        return self

    def transform(self, X):
        """Left-multiply by ``S``; ``transform`` of the fitted matrix is ``N``."""
        check_is_fitted(self, "sign_")
        x = np.asarray(X, dtype=np.complex128)
        if x.ndim != 2 or x.shape[0] != self.n_features_in_:
            raise ValueError(f"X must have {self.n_features_in_} rows, got shape {x.shape}")
        return self.sign_ @ x

    def projector(self, positive=True):
        """Spectral projector ``(I +- S)/2`` onto the right (left) half-plane eigenspace."""
        check_is_fitted(self, "sign_")
        eye = np.eye(self.sign_.shape[0])
        return 0.5 * (eye + self.sign_) if positive else 0.5 * (eye - self.sign_)


class UnitaryEigensolver(TransformerMixin, BaseEstimator):
    """Spectral divide-and-conquer eigendecomposition ``A = V diag(lam) V^*``.

    Parameters
    ----------
    sign_method : {"zolo", "pade", "newton", "direct"}, default="zolo"
    n, delta, max_iter, gap_floor
        As for :class:`UnitarySignDecomposition`.

    Attributes
    ----------
    eigenvectors_ : ndarray
    eigenvalues_ : ndarray
    residual_ : float
        ``||A - V Lam V^*||_2``.
    orthogonality_ : float
        ``||V^* V - I||_2``.
    notes_ : list of str
    """

    def __init__(self, sign_method="zolo", n=1, delta=1e-16, max_iter=60, gap_floor=GAP_FLOOR):
        self.sign_method = sign_method
        self.n = n
        self.delta = delta
        self.max_iter = max_iter
        self.gap_floor = gap_floor

    def fit(self, X, y=None):
        _check_method(self.sign_method)
        a = check_unitary(X, "X")
        dec = divide_and_conquer(a, _config(self), self.sign_method)
        self.eigenvectors_ = dec.v
        self.eigenvalues_ = dec.lam
        self.residual_, self.orthogonality_ = dec.residuals(a)
        self.notes_ = dec.notes
        self.n_features_in_ = a.shape[1]
        return self

    def transform(self, X):
        """Express a square matrix in the eigenbasis, ``V^* X V``."""
        check_is_fitted(self, "eigenvectors_")
        x = as_matrix(X, "X")
        if x.shape[0] != self.n_features_in_:
            raise ValueError(f"X must be {self.n_features_in_} x {self.n_features_in_}")
        v = self.eigenvectors_
        return ctranspose(v) @ x @ v

    def inverse_transform(self, X):
        check_is_fitted(self, "eigenvectors_")
        v = self.eigenvectors_
        return v @ as_matrix(X, "X") @ ctranspose(v)
