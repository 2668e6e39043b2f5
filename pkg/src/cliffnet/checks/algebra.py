"""Products of the specialized algebras against the symbolic oracle."""

import numpy as np
from .. import algebra
from .. import oracle
from ._base import check_record, scaled

SUITE = 'algebra'

RANDOM_CASES = 10000


def _product(signature, a, b):
    # looked up on the module so a patched product is what gets checked
    if signature.n == 2:
        return algebra.geometric_product_2d(a, b, signature)
    return algebra.geometric_product_3d(a, b)


def _basis_errors(signature):
    size = signature.blade_count
    errors = []
    for i in range(size):
        for j in range(size):
            a = [0.0] * size
            b = [0.0] * size
            a[i] = 1.0
            b[j] = 1.0
            got = np.array(_product(signature, a, b), dtype=np.float64)
            want = np.array(oracle.oracle_gp(tuple(signature), a, b), dtype=np.float64)
            errors.append(np.max(np.abs(got - want)))
    return errors


def _random_errors(signature, rng, cases):
    size = signature.blade_count
    a = rng.standard_normal((size, cases))
    b = rng.standard_normal((size, cases))
    got = np.stack(_product(signature, list(a), list(b)))
    want = np.stack(oracle.oracle_gp(tuple(signature), list(a), list(b)))
    return np.max(np.abs(got - want), axis=0)


def _table_errors(signature):
    table = algebra.build_blade_table(signature)
    errors = []
    for i, j, r, sign in oracle.symbolic_blade_product(tuple(signature)):
        ok = table.index[i, j] == r and table.sign[i, j] == sign
        errors.append(0.0 if ok else 1.0)
    return errors


def algebra_suite(seed=0, scale=1.0):
    rng = np.random.default_rng([seed, 1])
    cases = scaled(RANDOM_CASES, scale)
    records = []

    for signature in (algebra.CL20, algebra.CL02, algebra.CL30):
        tag = 'cl{}{}'.format(signature.p, signature.q)
        records.append(check_record(
            SUITE, 'gp_basis_' + tag, _basis_errors(signature), 0.0, signature.blade_count ** 2))
        records.append(check_record(
            SUITE, 'gp_random_' + tag, _random_errors(signature, rng, cases), 1e-12, cases))
        records.append(check_record(
            SUITE, 'blade_table_' + tag, _table_errors(signature), 0.0, signature.blade_count ** 2))

    # Cl(0,1) is the complex numbers
    a = rng.standard_normal((2, cases))
    b = rng.standard_normal((2, cases))
    got = algebra.table_product(algebra.build_blade_table(algebra.CL01), list(a), list(b))
    want = (a[0] + 1j * a[1]) * (b[0] + 1j * b[1])
    err = np.maximum(np.abs(got[0] - want.real), np.abs(got[1] - want.imag))
    records.append(check_record(SUITE, 'complex_cl01', err, 1e-12, cases))

    # Cl(0,2) is the quaternions under 1, e1, e2, e12 -> 1, i, j, k
    a = rng.standard_normal((4, cases))
    b = rng.standard_normal((4, cases))
    got = np.stack(_product(algebra.CL02, list(a), list(b)))
    want = np.stack(oracle.oracle_quaternion_product(list(a), list(b)))
    records.append(check_record(
        SUITE, 'quaternion_cl02', np.max(np.abs(got - want), axis=0), 1e-12, cases))

    q = rng.standard_normal((4, cases))
    v = rng.standard_normal((3, cases))
    rot = algebra.rotation_matrix_entries(*q, epsilon=0.0)
    got = np.stack([sum(rot[r][c] * v[c] for c in range(3)) for r in range(3)])
    want = np.stack(oracle.oracle_quaternion_rotate(list(q), list(v)))
    records.append(check_record(
        SUITE, 'quaternion_rotation', np.max(np.abs(got - want), axis=0), 1e-12, cases))

    errors = []
    for signature in (algebra.CL20, algebra.CL02, algebra.CL30):
        i = algebra.pseudoscalar(signature)
        square = np.array(_product(signature, i, i))
        want = np.zeros(signature.blade_count)
        want[0] = -1.0
        errors.append(np.max(np.abs(square - want)))
    records.append(check_record(SUITE, 'pseudoscalar_square', errors, 0.0, len(errors)))

    errors = []
    for signature in (algebra.CL20, algebra.CL30):
        a = rng.standard_normal((signature.blade_count, cases))
        twice = np.stack(algebra.reverse(algebra.reverse(list(a), signature.n), signature.n))
        errors.append(np.max(np.abs(twice - a)))
        parts = sum(np.stack(algebra.grade_projection(list(a), signature.n, k))
                    for k in range(signature.n + 1))
        errors.append(np.max(np.abs(parts - a)))
    records.append(check_record(SUITE, 'reverse_and_grades', errors, 0.0, 2 * cases))
    return records
