import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES = {}


def record_acceptance(key: str, ok: bool, detail: str = ""):
    ACCEPTANCE_LINES[key] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k.split(":")[0])):
        ok, detail = ACCEPTANCE_LINES[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}  {detail}")


@pytest.fixture
def rng():
    import random
    return random.Random(12345)


def mat(F, rows):
    from rlie.linalg import Matrix
    return Matrix.from_rows(F, rows)


def random_matrix(F, d, rng):
    import numpy as np
    from rlie.linalg import Matrix
    return Matrix(F, np.asarray([[F.random_element(rng).coeffs for _ in range(d)] for _ in range(d)],
                                dtype=np.int64).reshape(d, d, F.m))


def commuting_module(F, n, d, rng):
    """Module for the n-dim abelian algebra with zero p-map: the actions are
    random polynomials in one random matrix, so they commute."""
    from rlie.liealg import LieAlgebra, RestrictedLieAlgebra
    from rlie.linalg import Matrix
    from rlie.repmod import LModule
    import numpy as np
    L = RestrictedLieAlgebra.from_lie(LieAlgebra.abelian(F, n), np.zeros((n, n, F.m), dtype=np.int64))
    A = random_matrix(F, d, rng)
    acts = []
    for _ in range(n):
        acc = Matrix.zeros(F, d, d)
        P = Matrix.identity(F, d)
        for _ in range(d):
            acc = acc + P.scale(F.random_element(rng))
            P = P @ A
        acts.append(acc)
    return LModule(L, acts, F, d)


def natural_module(F, d, k, rng):
    """Natural module of the p-closure of k random d x d matrices."""
    from rlie.liealg import matrix_p_closure
    from rlie.repmod import LModule
    while True:
        L = matrix_p_closure([random_matrix(F, d, rng) for _ in range(k)])
        if L.dim:
            return LModule.natural(L)


def worked_instance(w_prime=False):
    """Abelian F_3-span{x, y} with zero p-map, S = span(x); V has rho(y) = 1,
    W has rho(y) = 2 (or rho(x) = 1 for the primed variant)."""
    import numpy as np
    from rlie.gf import gf
    from rlie.liealg import LieAlgebra, RestrictedLieAlgebra, Subalgebra
    from rlie.repmod import LModule
    from rlie.theorem import Instance
    F = gf(3)
    L = RestrictedLieAlgebra.from_lie(LieAlgebra.abelian(F, 2), np.zeros((2, 2, 1), dtype=np.int64))
    S = Subalgebra.spanned_by(L, [[1, 0]])
    V = LModule.one_dim(L, [0, 1])
    W = LModule.one_dim(L, [1, 0] if w_prime else [0, 2])
    return Instance(L, S, V, W)
