"""Shared test utilities: brute-force oracles and block-map assembly.

The oracles recompute adjoint data straight from the defining trace pairing,
one matrix unit at a time, so the vectorized library code is always checked
against an independent route.
"""

import numpy as np

from extremalmaps import (BlockShape, Functional, Superoperator,
                          functional_apply, haar_isometry, random_form1,
                          random_form2, random_unit)


def pullback_oracle(psi, rho):
    """Adjoint image of ``rho`` computed entry by entry.

    The representative of a functional sigma satisfies sigma(e_pq) = S[q, p],
    so evaluating ``rho`` on every matrix-unit image rebuilds the pullback
    without touching the library's einsum path.
    """
    reps = []
    for b, k in enumerate(psi.in_shape):
        s = np.zeros((k, k), dtype=np.complex128)
        for p in range(k):
            for q in range(k):
                s[q, p] = functional_apply(rho, psi.unit_image(b, p, q))
        reps.append(s)
    return Functional(psi.in_shape, tuple(reps))


def apply_oracle(psi, a):
    """Image of ``a`` assembled from unit images by plain linearity."""
    out = [np.zeros((h, h), dtype=np.complex128) for h in psi.out_shape]
    for b, k in enumerate(psi.in_shape):
        for p in range(k):
            for q in range(k):
                img = psi.unit_image(b, p, q)
                for c in range(len(psi.out_shape)):
                    out[c] += a.blocks[b][p, q] * img.blocks[c]
    return out


def assemble(in_dims, out_parts):
    """Glue single-pair maps into one block map.

    ``out_parts`` lists ``(in_block, part)`` per output block, where ``part``
    is a one-block-to-one-block superoperator acting on input block
    ``in_block``.  All other tensor cells are zero.
    """
    out_dims = tuple(p.out_shape.dims[0] for _, p in out_parts)
    in_shape = BlockShape(tuple(in_dims))
    out_shape = BlockShape(out_dims)
    tensors = [[np.zeros((h, h, k, k), dtype=np.complex128) for h in out_dims]
               for k in in_dims]
    for c, (b, part) in enumerate(out_parts):
        if part.in_shape.dims[0] != in_dims[b]:
            raise ValueError("part does not fit its input block")
        tensors[b][c] = part.tensors[0][0]
    return Superoperator(in_shape, out_shape,
                         tuple(tuple(row) for row in tensors))


FORMS = ("1", "1t", "2", "2a")


def random_block(rng, form, k, h):
    """One random canonical-form block map, by form label."""
    if form == "1":
        return random_form1(rng, k, h, transposed=False)
    if form == "1t":
        return random_form1(rng, k, h, transposed=True)
    if form == "2":
        return random_form2(rng, k, h, adjoint_variant=False)
    if form == "2a":
        return random_form2(rng, k, h, adjoint_variant=True)
    raise ValueError(form)


def random_mixed_map(rng, n_blocks):
    """Random accepted multi-block map with a permuted block assignment.

    Returns ``(psi, specs, assignment)`` where ``specs[c] = (form, k, h)``
    describes output block ``c`` and ``assignment[c]`` is the input block
    feeding it.
    """
    perm = rng.permutation(n_blocks)
    specs = []
    parts = []
    in_dims = [0] * n_blocks
    for c in range(n_blocks):
        form = FORMS[rng.integers(len(FORMS))]
        h = int(rng.integers(2, 4))
        k_min = h * h if form in ("2", "2a") else h
        k = int(rng.integers(k_min, 10))
        psi, _ = random_block(rng, form, k, h)
        specs.append((form, k, h))
        parts.append((int(perm[c]), psi))
        in_dims[perm[c]] = k
    return assemble(in_dims, parts), specs, tuple(int(b) for b, _ in parts)


def haar_unitary(rng, n):
    return haar_isometry(rng, n, n)


def random_functional(rng, shape):
    """Random (not necessarily extremal) functional with complex entries."""
    reps = [rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
            for k in shape]
    return Functional(shape, tuple(reps))


def random_pure_pair(rng, n):
    u = random_unit(rng, n)
    v = random_unit(rng, n)
    return u, v
