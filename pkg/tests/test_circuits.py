"""Circuit compilation: PRG twin, verifier equivalence, witness lifting."""

import pytest

from npshare.circuits import (
    Builder,
    CnfMPrimeRelation,
    compile_mprime,
    decode_witness,
    encode_inner,
    eval_circuit,
    eval_wires,
    extend_assignment,
    inner_witness_width,
    lift_witness,
    toy_prg_wires,
)
from npshare.cnf import check_assignment, tseitin
from npshare.commitments import commit, crs_gen, prg_toy, sample_opening
from npshare.induced import MPrimeInstance, MPrimeWitness, mprime_verify
from npshare.rng import Stream, derive_seed
from npshare.structures import (
    MonotoneCircuit,
    circuit_structure,
    edge_index,
    hamiltonian_structure,
    matching_structure,
    threshold_structure,
)


def toy_instance(structure, seed, k=6):
    rng = Stream(seed)
    crs = crs_gen(structure.n, k, rng, expansion="toy")
    openings = [sample_opening(crs, rng) for _ in range(structure.n)]
    coms = tuple(commit(i + 1, op, crs) for i, op in enumerate(openings))
    return MPrimeInstance(crs=crs, commitments=coms, structure=structure), openings


@pytest.mark.parametrize("k", [4, 6, 8])
def test_toy_prg_circuit_matches_all_seeds(k):
    bd = Builder(k)
    outs = toy_prg_wires(bd, list(range(k)), k)
    circuit = bd.finish(0)
    for seed in range(1 << k):
        wires = eval_wires(circuit, [(seed >> b) & 1 for b in range(k)])
        got = 0
        for j, w in enumerate(outs):
            bit = w if isinstance(w, bool) else wires[w]
            got |= int(bit) << j
        assert got == prg_toy(seed, k), f"seed {seed}"


def test_builder_constant_folding():
    bd = Builder(2)
    assert bd.and_(True, 0) == 0
    assert bd.and_(False, 0) is False
    assert bd.or_(True, 1) is True
    assert bd.xor(False, 1) == 1
    assert bd.not_(bd.not_(0)) == 0
    assert bd.and_(0, 0) == 0
    assert bd.xor(0, 0) is False
    w = bd.and_(0, 1)
    assert bd.and_(1, 0) == w  # structural dedup, commuted


STRUCTURES = [
    threshold_structure(3, 2),
    hamiltonian_structure(4),
    matching_structure(4),
    circuit_structure(
        MonotoneCircuit(
            n_std=4, n_free=1,
            gates=(("and", 0, 1), ("not", 4), ("and", 2, 6), ("and", 7, 3), ("or", 5, 8)),
            output=9,
        )
    ),
]


@pytest.mark.parametrize("structure", STRUCTURES, ids=lambda s: s.kind)
def test_compiled_circuit_accepts_honest_witness(structure):
    inst, openings = toy_instance(structure, 100 + structure.n)
    circuit = compile_mprime(inst)
    if structure.kind == "threshold":
        qualified, inner = {1, 2}, None
    elif structure.kind == "hamiltonian":
        inner = (1, 2, 3, 4)
        qualified = {edge_index(4, inner[i], inner[(i + 1) % 4]) for i in range(4)}
    elif structure.kind == "matching":
        inner = ((1, 2), (3, 4))
        qualified = {edge_index(4, a, b) for a, b in inner}
    else:
        qualified, inner = {1, 2}, (1,)
    wit = MPrimeWitness(
        openings=tuple(openings[i - 1] if i in qualified else None
                       for i in range(1, structure.n + 1)),
        inner=inner,
    )
    assert mprime_verify(inst, wit) is True
    assert eval_circuit(circuit, lift_witness(circuit, wit)) is True


def test_all_zero_inputs_reject():
    # presence flags all 0 encode the empty set, unqualified everywhere
    for structure in STRUCTURES:
        inst, _ = toy_instance(structure, 200 + structure.n)
        circuit = compile_mprime(inst)
        assert eval_circuit(circuit, [False] * circuit.n_inputs) is False


@pytest.mark.parametrize("structure", STRUCTURES, ids=lambda s: s.kind)
def test_circuit_equals_verifier_on_random_inputs(structure):
    # 500 random input vectors: circuit output == mprime_verify on the
    # decoded witness (oracle equivalence against the native path).
    inst, _ = toy_instance(structure, 300 + structure.n)
    circuit = compile_mprime(inst)
    agree = 0
    for trial in range(500):
        rng = Stream(derive_seed(0x51AC + structure.n, trial))
        inputs = [bool(rng.bit()) for _ in range(circuit.n_inputs)]
        wit = decode_witness(circuit, inputs)
        assert eval_circuit(circuit, inputs) == mprime_verify(inst, wit)
        agree += 1
    assert agree == 500


def test_witness_lift_round_trip():
    structure = hamiltonian_structure(4)
    inst, openings = toy_instance(structure, 400)
    circuit = compile_mprime(inst)
    cycle = (1, 2, 3, 4)
    qualified = {edge_index(4, cycle[i], cycle[(i + 1) % 4]) for i in range(4)}
    wit = MPrimeWitness(
        openings=tuple(openings[i - 1] if i in qualified else None for i in range(1, 7)),
        inner=cycle,
    )
    inputs = lift_witness(circuit, wit)
    again = decode_witness(circuit, inputs)
    assert again == wit
    # the input assignment extends uniquely to a satisfying CNF assignment
    cnf = tseitin(circuit)
    assignment = extend_assignment(circuit, inputs)
    assert check_assignment(cnf, assignment)


def test_lifted_witness_satisfies_cnf_iff_valid():
    structure = threshold_structure(3, 2)
    inst, openings = toy_instance(structure, 500)
    circuit = compile_mprime(inst)
    cnf = tseitin(circuit)
    good = MPrimeWitness(openings=(openings[0], openings[1], None), inner=None)
    bad = MPrimeWitness(openings=(openings[0], None, None), inner=None)
    assert check_assignment(cnf, extend_assignment(circuit, lift_witness(circuit, good)))
    assert not check_assignment(cnf, extend_assignment(circuit, lift_witness(circuit, bad)))


def test_cnf_relation_accepts_both_witness_forms():
    structure = threshold_structure(3, 2)
    inst, openings = toy_instance(structure, 600)
    rel = CnfMPrimeRelation.compile(inst)
    wit = MPrimeWitness(openings=(openings[0], openings[1], None), inner=None)
    assert rel.check(wit) is True
    assignment = extend_assignment(rel.circuit, lift_witness(rel.circuit, wit))
    assert rel.check(assignment) is True
    assert rel.check(assignment[:-5]) is False  # length mismatch -> invalid
    assert rel.check("garbage") is False
    assert rel.in_language() is True


def test_monotone_sublayout_in_characteristic_wires():
    # Flipping any x-wire 0 -> 1 (with the witness fixed) never turns the
    # structure predicate off: checked semantically through the meta hook.
    structure = threshold_structure(4, 2)
    inst, openings = toy_instance(structure, 700)
    circuit = compile_mprime(inst)
    meta = circuit.meta
    assert len(meta.x_wires) == 4
    base_wit = MPrimeWitness(openings=(openings[0], openings[1], None, None), inner=None)
    inputs = lift_witness(circuit, base_wit)
    wires = eval_wires(circuit, inputs)
    assert wires[circuit.output] is True
    x_vals = [wires[w] for w in meta.x_wires]
    assert x_vals == [True, True, False, False]


def test_compile_bounds():
    inst, _ = toy_instance(threshold_structure(3, 2), 800, k=8)
    compile_mprime(inst)  # fine
    big_k = Stream(1)
    crs = crs_gen(3, 10, big_k, expansion="toy")
    coms = tuple(commit(i, sample_opening(crs, big_k), crs) for i in (1, 2, 3))
    inst_bad = MPrimeInstance(crs=crs, commitments=coms, structure=threshold_structure(3, 2))
    with pytest.raises(ValueError):
        compile_mprime(inst_bad)
    # default expansion is not compilable
    rng = Stream(2)
    crs_sm = crs_gen(3, 8, rng)
    coms_sm = tuple(commit(i, sample_opening(crs_sm, rng), crs_sm) for i in (1, 2, 3))
    inst_sm = MPrimeInstance(crs=crs_sm, commitments=coms_sm, structure=threshold_structure(3, 2))
    with pytest.raises(ValueError):
        compile_mprime(inst_sm)


def test_inner_encoding_round_trip():
    ham = hamiltonian_structure(4)
    assert inner_witness_width(ham) == 16
    bits = encode_inner(ham, (2, 4, 1, 3))
    from npshare.circuits import decode_inner

    assert decode_inner(ham, bits) == (2, 4, 1, 3)
    mt = matching_structure(4)
    bits_m = encode_inner(mt, ((1, 3), (2, 4)))
    assert set(decode_inner(mt, bits_m)) == {(1, 3), (2, 4)}
