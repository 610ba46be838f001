"""Dense 3x3 / 3x3x3x3 tensor algebra for finite-strain mixture mechanics.

Second-order tensors are numpy arrays of shape (3, 3); fourth-order tensors
are numpy arrays of shape (3, 3, 3, 3) with index order (i, j, k, l). No
symmetry-compressed (Voigt) storage is used anywhere: sizes are trivial and
full storage keeps every contraction an einsum away.

Conventions
-----------
mixed dyadic   (A o B)[i,j,k,l] = A[i,k] * B[j,l]
double dot     A:B       = A[i,j] B[i,j]               (2nd : 2nd -> scalar)
               (A:BB)[k,l] = A[i,j] BB[i,j,k,l]        (2nd : 4th -> 2nd)
               (AA:B)[i,j] = AA[i,j,k,l] B[k,l]        (4th : 2nd -> 2nd)
               (AA:BB)[i,j,k,l] = AA[i,j,m,n] BB[m,n,k,l]
"""

from __future__ import annotations

import numpy as np

from .errors import KinematicsError

I2 = np.eye(3)


def is_spd(A: np.ndarray, tol: float = 0.0) -> bool:
    """True if A is symmetric positive-definite (eigenvalues > tol)."""
    if not np.allclose(A, A.T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(A).max())):
        return False
    return bool(np.linalg.eigvalsh(0.5 * (A + A.T)).min() > tol)


def check_deformation_gradient(F: np.ndarray) -> float:
    """Validate F (finite, det > 0) and return det(F)."""
    F = np.asarray(F, dtype=float)
    if F.shape != (3, 3) or not np.all(np.isfinite(F)):
        raise KinematicsError("deformation gradient must be a finite 3x3 tensor")
    J = float(np.linalg.det(F))
    if J <= 0.0:
        raise KinematicsError(f"deformation gradient has non-positive determinant {J:g}")
    return J


def polar_rotation(F: np.ndarray) -> np.ndarray:
    """Rotation factor R of the right polar decomposition F = R U.

    U = sqrt(F^T F) is computed by eigendecomposition of F^T F, which is
    robust for the well-conditioned, near-diagonal F arising in membrane
    kinematics. R is proper orthogonal (det R = 1) whenever det F > 0.
    """
    check_deformation_gradient(F)
    C = F.T @ F
    w, V = np.linalg.eigh(C)
    if w.min() <= 0.0:
        raise KinematicsError("F^T F is not positive definite")
    U_inv = (V / np.sqrt(w)) @ V.T
    return F @ U_inv


def mixed_dyadic(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Mixed dyadic product (A o B)[i,j,k,l] = A[i,k] B[j,l]."""
    return np.einsum("ik,jl->ijkl", A, B)


def ddot(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray | float:
    """Double contraction, dispatched on operand ranks (see module docstring)."""
    lhs = np.asarray(lhs)
    rhs = np.asarray(rhs)
    ranks = (lhs.ndim, rhs.ndim)
    if ranks == (2, 2):
        return float(np.einsum("ij,ij->", lhs, rhs))
    if ranks == (2, 4):
        return np.einsum("ij,ijkl->kl", lhs, rhs)
    if ranks == (4, 2):
        return np.einsum("ijkl,kl->ij", lhs, rhs)
    if ranks == (4, 4):
        return np.einsum("ijmn,mnkl->ijkl", lhs, rhs)
    raise ValueError(f"unsupported operand ranks {ranks} for double contraction")


def pushforward_stress(F: np.ndarray, S: np.ndarray, J: float) -> np.ndarray:
    """Cauchy stress sigma = (1/J) F S F^T from a second Piola-Kirchhoff S."""
    if J <= 0.0:
        raise KinematicsError(f"volume ratio must be positive, got {J:g}")
    return (F @ S @ F.T) / J


def pullback_stress(F: np.ndarray, sigma: np.ndarray, J: float) -> np.ndarray:
    """Inverse of :func:`pushforward_stress`: S = J F^-1 sigma F^-T."""
    if J <= 0.0:
        raise KinematicsError(f"volume ratio must be positive, got {J:g}")
    Finv = np.linalg.inv(F)
    return J * (Finv @ sigma @ Finv.T)


def pushforward_elasticity(F: np.ndarray, C4: np.ndarray, J: float) -> np.ndarray:
    """Spatial elasticity c = (1/J) (F o F) : C : (F^T o F^T).

    Component form: c[i,j,k,l] = (1/J) F[i,m] F[j,n] C[m,n,p,q] F[k,p] F[l,q].
    """
    if J <= 0.0:
        raise KinematicsError(f"volume ratio must be positive, got {J:g}")
    return np.einsum("im,jn,mnpq,kp,lq->ijkl", F, F, C4, F, F) / J


def pullback_elasticity_map(A: np.ndarray, C4: np.ndarray) -> np.ndarray:
    """Congruence map C'[i,j,k,l] = A[i,m] A[j,n] C[m,n,p,q] A[k,p] A[l,q].

    With A = F^-1(tau) F_G(tau) this carries a cohort-level elasticity tensor
    into the mixture reference configuration; identical index structure to
    (A o A) : C : (A^T o A^T).
    """
    return np.einsum("im,jn,mnpq,kp,lq->ijkl", A, A, C4, A, A)


def minor_symmetry_error(T: np.ndarray) -> float:
    """Max relative violation of the minor symmetries T[ijkl]=T[jikl]=T[ijlk]."""
    scale = max(float(np.abs(T).max()), 1e-300)
    err_left = np.abs(T - T.transpose(1, 0, 2, 3)).max()
    err_right = np.abs(T - T.transpose(0, 1, 3, 2)).max()
    return float(max(err_left, err_right) / scale)
