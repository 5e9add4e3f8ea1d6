"""Independent reference computations used by the tests.

Nothing here imports the package's numerical code: the solvers are plain
Python / mpmath so a bug in the vectorized path cannot hide in the oracle.
"""

import mpmath as mp

mp.mp.dps = 40


def gauss_solve(A, b):
    """Dense Gaussian elimination with partial pivoting on Python floats."""
    n = len(A)
    M = [list(map(float, row)) + [float(bi)] for row, bi in zip(A, b)]
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        if M[piv][col] == 0.0:
            raise ZeroDivisionError("singular")
        M[col], M[piv] = M[piv], M[col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            for c in range(col, n + 1):
                M[r][c] -= f * M[col][c]
    x = [0.0] * n
    for r in range(n - 1, -1, -1):
        s = M[r][n] - sum(M[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / M[r][r]
    return x


def standardize_columns(X):
    """Population z-score per column; zero-spread columns get divisor 1."""
    n, d = len(X), len(X[0])
    means = [sum(X[i][j] for i in range(n)) / n for j in range(d)]
    stds = []
    for j in range(d):
        var = sum((X[i][j] - means[j]) ** 2 for i in range(n)) / n
        sd = var**0.5
        stds.append(1.0 if sd < 1e-12 else sd)
    Z = [[(X[i][j] - means[j]) / stds[j] for j in range(d)] for i in range(n)]
    return Z, means, stds


def ridge_normal_equations(X, y, ridge):
    """Weights on standardized columns and intercept, via explicit normal equations."""
    Z, _, _ = standardize_columns(X)
    n, d = len(Z), len(Z[0])
    ybar = sum(y) / n
    yc = [v - ybar for v in y]
    A = [[sum(Z[k][i] * Z[k][j] for k in range(n)) + (ridge if i == j else 0.0) for j in range(d)] for i in range(d)]
    b = [sum(Z[k][i] * yc[k] for k in range(n)) for i in range(d)]
    return gauss_solve(A, b), ybar, Z


def grnn_direct(patterns, targets, sigma, query):
    """Unstabilized kernel average evaluated in extended precision."""
    num = den = mp.mpf(0)
    s2 = 2 * mp.mpf(sigma) ** 2
    for p, t in zip(patterns, targets):
        d2 = sum((mp.mpf(float(a)) - mp.mpf(float(b))) ** 2 for a, b in zip(query, p))
        w = mp.e ** (-d2 / s2)
        num += mp.mpf(float(t)) * w
        den += w
    return num / den


def mlp_forward_mp(W1, b1, W2, b2, x):
    """``W2 . sigmoid(W1 x + b1) + b2`` step by step in mpmath."""
    out = mp.mpf(float(b2))
    for row, bias, w2 in zip(W1, b1, W2):
        z = mp.mpf(float(bias)) + sum(mp.mpf(float(a)) * mp.mpf(float(v)) for a, v in zip(row, x))
        out += mp.mpf(float(w2)) / (1 + mp.e ** (-z))
    return out


def rms_mp(p, a):
    return mp.sqrt(sum((mp.mpf(float(u)) - mp.mpf(float(v))) ** 2 for u, v in zip(p, a)) / len(p))


def central_difference(f, theta, step=1e-5):
    """Gradient of scalar ``f`` at flat ``theta`` by central differences."""
    grad = []
    base = list(theta)
    for i in range(len(base)):
        up = base.copy()
        dn = base.copy()
        up[i] += step
        dn[i] -= step
        grad.append((f(up) - f(dn)) / (2 * step))
    return grad
