"""The compiled and pure kernels must be bit-for-bit interchangeable."""

import random

import pytest

from gen import random_structure, random_trace, relational_sentence, temporal_formula
from lexdialog import _kernel
from lexdialog._kernel import encode, pure
from lexdialog.formula import atom_names
from lexdialog.signature import relational
from lexdialog.transform import expand_macros

needs_speed = pytest.mark.skipif(not _kernel.compiled_available(),
                                 reason="compiled kernels not built")


def test_backend_is_reported():
    assert _kernel.active_backend() in ("pure", "compiled")


@needs_speed
def test_ltlf_tables_identical():
    from lexdialog._kernel import _speed
    from array import array
    rng = random.Random(101)
    atoms = ["p", "q", "r"]
    for _ in range(300):
        f = temporal_formula(rng, atoms, rng.randint(1, 10))
        order = tuple(sorted(atom_names(f)))
        program = encode.compile_temporal(f, order)
        t = random_trace(rng, list(order), 6)
        masks = encode.encode_trace(t, order)
        a = bytes(pure.ltlf_table(program.code, program.n_nodes, masks))
        b = bytes(_speed.ltlf_table(program.code, program.n_nodes,
                                    array("Q", masks)))
        assert a == b


@needs_speed
def test_fo_eval_identical():
    from lexdialog._kernel import _speed
    from array import array
    rng = random.Random(103)
    sig = relational(["P", "Q"], {"f": (0, 2), "g": (-1, 1)})
    for _ in range(300):
        f = expand_macros(relational_sentence(rng, sig, max_qr=3), sig)
        program = encode.compile_relational(f, sig)
        m = random_structure(rng, sig, 4)
        masks, vals = encode.encode_structure(m, sig.predicates,
                                              sig.function_names)
        env = [0] * max(program.n_slots, 1)
        a = pure.fo_eval(program.code, program.root, len(m.domain), masks,
                         vals, list(env))
        b = _speed.fo_eval(program.code, program.root, len(m.domain),
                           array("q", masks), array("q", vals),
                           array("q", env))
        assert bool(a) == bool(b)


@needs_speed
def test_fo_scan_identical_trajectories():
    from lexdialog._kernel import _speed
    from array import array
    rng = random.Random(107)
    sig = relational(["P"], {"f": (0, 1)})
    for _ in range(100):
        f = expand_macros(relational_sentence(rng, sig, max_qr=2), sig)
        program = encode.compile_relational(f, sig)
        size = rng.randint(1, 3)
        radii = encode.candidate_radii(sig, size)
        func_los = [lo for _, lo, _ in sig.functions]
        ext, digits = encode.first_candidate(size, len(func_los))
        chunk = rng.randint(1, 7)
        while True:
            ra = pure.fo_scan(program.code, program.root, program.n_slots,
                              size, len(sig.predicates), func_los, radii,
                              ext, list(digits), chunk)
            rb = _speed.fo_scan(program.code, program.root, program.n_slots,
                                size, len(sig.predicates),
                                array("q", func_los), array("q", radii),
                                ext, array("q", digits), chunk)
            assert ra[0] == rb[0] and ra[1] == rb[1] and ra[3] == rb[3]
            assert list(ra[2]) == list(rb[2])
            status, ext, digits, _ = ra
            if status != pure.MORE:
                break


def test_candidate_enumeration_order_is_documented_shape():
    # first candidate: everything empty, all function values at range minimum
    sig = relational(["P"], {"f": (3, 5)})
    ext, digits = encode.first_candidate(2, 1)
    m = encode.candidate_model(sig, 2, ext, digits)
    assert m.domain == ("e1", "e2")
    assert m.predicates["P"] == frozenset()
    assert m.functions["f"] == {"e1": 3, "e2": 3}

    # the function odometer moves before the extension counter
    radii = encode.candidate_radii(sig, 2)
    nxt = encode.advance_candidate(ext, list(digits), 2, 1, radii)
    assert nxt is not None
    m2 = encode.candidate_model(sig, 2, nxt[0], nxt[1])
    assert m2.predicates["P"] == frozenset()
    assert m2.functions["f"] == {"e1": 3, "e2": 4}


def test_enumeration_is_exhaustive_and_duplicate_free():
    sig = relational(["P"], {"f": (0, 1)})
    size = 2
    radii = encode.candidate_radii(sig, size)
    state = encode.first_candidate(size, 1)
    seen = set()
    while state is not None:
        ext, digits = state
        m = encode.candidate_model(sig, size, ext, digits)
        key = (tuple(sorted(m.predicates["P"])),
               tuple(sorted(m.functions["f"].items())))
        assert key not in seen
        seen.add(key)
        state = encode.advance_candidate(ext, list(digits), size,
                                         len(sig.predicates), radii)
    assert len(seen) == (2 ** 2) * (2 ** 2)  # extensions times tables
