import itertools
import json

import numpy as np
import pytest

import pipelines as pl
from forge import codes, oracle as O, tasks
from forge.concat import CompositionError
from forge.pauli import PauliString
from forge.stabilizer import StabilizerTableau

P = PauliString.from_str
OUTCOMES = [tasks.PHI_PLUS, tasks.PSI_PLUS, tasks.PHI_MINUS, tasks.PSI_MINUS]
RNG = np.random.default_rng(7)


def random_qubit():
    v = RNG.normal(size=2) + 1j * RNG.normal(size=2)
    return v / np.linalg.norm(v)


class TestEncodeCorrection:
    def test_table_rows(self):
        aux = codes.bitflip(3)
        assert tasks.encode_correction(tasks.PHI_PLUS, aux).is_identity()
        assert tasks.encode_correction(tasks.PSI_PLUS, aux) == P("XXX")
        assert tasks.encode_correction(tasks.PHI_MINUS, aux) == P("ZII")
        assert tasks.encode_correction(tasks.PSI_MINUS, aux).is_hermitian()

    def test_needs_encoder(self):
        with pytest.raises(ValueError):
            tasks.encode_correction(tasks.PHI_PLUS, codes.dejmps())

    @pytest.mark.parametrize("spec", ["bitflip:3", "phaseflip:3", "dfs", "shor:2x2", "wire"])
    @pytest.mark.parametrize("outcome", OUTCOMES)
    def test_read_in_recovers_encoded_state(self, spec, outcome):
        aux = codes.parse(spec)
        zero, one = pl.CODEWORDS[spec]()
        chi = random_qubit()
        s = O.tensor(O.DenseState(chi, 1), pl.encoder_state(spec))
        out, _ = O.bell_project(s, 0, 1, outcome)
        fixed = O.apply_pauli(tasks.encode_correction(outcome, aux), out.amplitudes)
        target = chi[0] * zero + chi[1] * one
        assert O.fidelity_up_to_phase(O.DenseState(fixed, out.n), O.DenseState(target.astype(complex), out.n)) > 1 - 1e-10


def teleport_decode(spec, pattern, errors, chi):
    """Dense reference: first error (identity first) consistent with the pattern."""
    zero, one = pl.CODEWORDS[spec]()
    m = len(pattern)
    dec = pl.decoder_state(spec)
    for e in [None] + list(errors):
        psi = chi[0] * zero + chi[1] * one
        if e is not None:
            psi = O.apply_pauli(e, psi.astype(complex))
        st = O.tensor(O.DenseState(psi.astype(complex), m), dec)
        labels = list(range(2 * m + 1))
        for l, oc in enumerate(pattern):
            st, _ = O.bell_project(st, labels.index(l), labels.index(m + 1 + l), oc)
            labels = [x for x in labels if x not in (l, m + 1 + l)]
        if st.norm < 1e-9:
            continue
        for letter in "IXYZ":
            fixed = O.apply_pauli(P(letter), st.normalized().amplitudes)
            if O.fidelity_up_to_phase(O.DenseState(fixed, 1), O.DenseState(chi, 1)) > 1 - 1e-9:
                return letter, e
    return None, None


def check_decode(spec, patterns):
    aux = tasks.decoder(spec)
    errors = codes.CodeSpec.parse(spec).correctable_errors(aux.m)
    chi = random_qubit()
    for pat in patterns:
        got = tasks.decode_correction(pat, aux, errors)
        letter, err = teleport_decode(spec, pat, errors, chi)
        if got.uncorrectable:
            assert letter is None
        else:
            assert got.letter == letter
            assert got.error == err


class TestDecodeCorrection:
    def test_all_phi_plus(self):
        r = tasks.decode_correction([tasks.PHI_PLUS] * 3, tasks.decoder("bitflip:3"))
        assert r.letter == "I" and r.error is None and not r.uncorrectable

    def test_logical_x(self):
        r = tasks.decode_correction([tasks.PSI_PLUS] * 3, tasks.decoder("bitflip:3"))
        assert r.letter == "X"

    def test_single_flip_detected(self):
        aux = tasks.decoder("bitflip:3")
        errs = codes.CodeSpec.parse("bitflip:3").correctable_errors(3)
        r = tasks.decode_correction([tasks.PSI_PLUS, tasks.PHI_PLUS, tasks.PHI_PLUS], aux, errs)
        assert r.letter == "I" and r.error == P("XII")

    def test_uncorrectable_defaults_to_identity(self):
        r = tasks.decode_correction([tasks.PSI_PLUS, tasks.PHI_PLUS], tasks.decoder("dfs"))
        assert r.uncorrectable and r.correction.is_identity()

    def test_wrong_length(self):
        with pytest.raises(ValueError):
            tasks.decode_correction([tasks.PHI_PLUS], tasks.decoder("bitflip:3"))

    @pytest.mark.parametrize("spec", ["bitflip:3", "phaseflip:3", "dfs"])
    def test_exhaustive_against_teleportation(self, spec):
        m = tasks.decoder(spec).m
        check_decode(spec, list(itertools.product(OUTCOMES, repeat=m)))

    def test_ring_sampled(self):
        rng = np.random.default_rng(3)
        patterns = [tuple(OUTCOMES[k] for k in rng.integers(0, 4, 5)) for _ in range(256)]
        check_decode("ring5", patterns)


class TestPropagation:
    def test_identity(self):
        t = tasks.syndrome_readout("bitflip:3")
        assert tasks.propagate_byproduct(t, P("III")).is_identity()

    def test_z_into_encoder(self):
        from forge.aux_ops import to_stabilizers

        out = tasks.propagate_byproduct(to_stabilizers(codes.bitflip(3)), P("Z"))
        assert out.unsigned() in {P("ZII"), P("IZI"), P("IIZ")}

    @pytest.mark.parametrize("letter", ["X", "Z"])
    def test_dejmps_single_flip_leaves_kept_branch(self, letter):
        from forge.aux_ops import to_stabilizers

        with pytest.raises(tasks.NotPropagatable):
            tasks.propagate_byproduct(to_stabilizers(codes.dejmps()), PauliString.single(2, 0, letter))

    @pytest.mark.parametrize("p_in", ["YI", "IY", "ZZ", "XX"])
    def test_dejmps_input_byproduct_dense(self, p_in):
        from forge.aux_ops import to_stabilizers

        t = to_stabilizers(codes.dejmps())
        p_in = P(p_in)
        p_out = tasks.propagate_byproduct(t, p_in)
        full = PauliString(p_out.x, p_out.z, 1, p_out.phase)
        op = full.embed(3, [0]) * p_in.embed(3, [1, 2])
        s = O.dejmps_resource()
        assert O.expectation_ok(op, s)

    def test_sign_is_exact(self):
        t = tasks.syndrome_readout("bitflip:3")
        for p in [P("XXX"), P("ZII"), P("YXX")]:
            out = tasks.propagate_byproduct(t, p)
            full = PauliString(p.x | out.x << 3, p.z | out.z << 3, 6, (p.phase + out.phase) % 4)
            assert O.expectation_ok(full, O.state_of(t))

    def test_chain(self):
        from forge.aux_ops import to_stabilizers

        wire = to_stabilizers(codes.wire())
        assert tasks.propagate_chain([wire, wire], P("Y")) == P("Y")

    def test_not_propagatable(self):
        with pytest.raises(tasks.NotPropagatable):
            tasks.propagate_byproduct(tasks.syndrome_readout("bitflip:3"), P("XII"))


class TestPurification:
    def test_keep_fraction_one_round(self):
        from forge.aux_ops import to_stabilizers

        t = to_stabilizers(codes.dejmps())
        verdicts = [tasks.classify_purification(t, pat) for pat in itertools.product(OUTCOMES, repeat=2)]
        assert sum(v.keep for v in verdicts) == 8
        assert verdicts[0].keep and verdicts[0].correction.is_identity()

    def test_correction_table(self):
        from forge.aux_ops import to_stabilizers

        table = tasks.CorrectionTable.for_tableau(to_stabilizers(codes.dejmps()))
        d = table.to_dict()
        assert d["phi+ phi+"] == "+I"
        assert sum(v == "discard" for v in d.values()) == 8

    def test_large_tables_only_single_patterns(self):
        t = tasks.logical_epp("bitflip:3")
        table = tasks.CorrectionTable.for_tableau(t, max_inputs=4)
        assert len(table.entries) == 1 + 3 * 6


PIPELINES = {
    "syndrome bitflip:3": (lambda: tasks.syndrome_readout("bitflip:3"),
                           lambda: pl.couple(pl.decoder_state("bitflip:3"), pl.encoder_state("bitflip:3"))),
    "switcher phaseflip:3 ring5": (lambda: tasks.switcher("phaseflip:3", "ring5"),
                                   lambda: pl.couple(pl.decoder_state("phaseflip:3"), pl.encoder_state("ring5"))),
    "logical epp bitflip:3": (lambda: tasks.logical_epp("bitflip:3"), lambda: pl.logical_epp("bitflip:3")),
    "logical epp dfs": (lambda: tasks.logical_epp("dfs"), lambda: pl.logical_epp("dfs")),
    "repeater": (lambda: tasks.repeater(tasks.purification_tower(1), tasks.purification_tower(1, "bob")),
                 lambda: pl.couple(O.dejmps_resource("alice"), O.dejmps_resource("bob"))),
    "wire switcher": (lambda: tasks.switcher("wire", "wire"),
                      lambda: pl.couple(pl.decoder_state("wire"), pl.encoder_state("wire"))),
}


@pytest.mark.parametrize("name", sorted(PIPELINES))
def test_pipeline_matches_dense(name):
    build, dense = PIPELINES[name]
    assert pl.fidelity(build(), dense()) > 1 - 1e-10


def test_sizes_and_roles():
    assert tasks.logical_epp("bitflip:3").n == 9
    assert tasks.logical_epp("dfs").n == 6
    rep = tasks.repeater(tasks.purification_tower(1), tasks.purification_tower(1))
    assert rep.roles == ("input",) * 4
    sw = tasks.switcher("phaseflip:3", "ring5")
    assert sw.roles == ("input",) * 3 + ("output",) * 5


def test_repeater_needs_outputs():
    with pytest.raises(CompositionError):
        tasks.repeater(codes.bitflip(2), codes.bitflip(2))


class TestPlans:
    LOGICAL_EPP = {
        "nodes": [
            {"id": "epp", "spec": "dejmps:alice"},
            {"id": "dec", "spec": "bitflip:3", "side": "output"},
            {"id": "enc", "spec": "bitflip:3"},
        ],
        "edges": [
            {"kind": "concatenate", "outer": "epp", "inner": "dec"},
            {"kind": "couple", "from": "epp", "to": "enc"},
        ],
    }

    def test_logical_epp_plan(self):
        plan = tasks.CompositionPlan.from_dict(self.LOGICAL_EPP)
        t, g = tasks.build(plan)
        assert t == tasks.logical_epp("bitflip:3")
        assert g.n == 9

    def test_round_trip(self):
        plan = tasks.CompositionPlan.from_dict(self.LOGICAL_EPP)
        assert tasks.CompositionPlan.from_json(json.dumps(plan.to_dict())) == plan

    def test_tower_plan(self):
        plan = tasks.CompositionPlan.from_dict({"nodes": [{"id": "t", "spec": "dejmps:alice@2"}], "edges": []})
        t, _ = tasks.build(plan)
        assert t.n == 5

    def test_swap_plan(self):
        plan = tasks.CompositionPlan.from_dict({
            "nodes": [{"id": "a", "spec": "dejmps:alice"}, {"id": "b", "spec": "dejmps:bob"}],
            "edges": [{"kind": "swap", "from": "a", "to": "b"}],
        })
        assert plan.build().n == 4

    @pytest.mark.parametrize("plan", [
        {"nodes": [{"id": "a", "spec": "wire"}, {"id": "a", "spec": "wire"}], "edges": []},
        {"nodes": [{"id": "a", "spec": "wire"}], "edges": [{"kind": "glue", "from": "a", "to": "a"}]},
        {"nodes": [{"id": "a", "spec": "wire"}], "edges": [{"kind": "couple", "from": "a", "to": "zz"}]},
        {"nodes": [{"id": "a", "spec": "bitflip:2"}, {"id": "b", "spec": "bitflip:2"}],
         "edges": [{"kind": "concatenate", "outer": "a", "inner": "b"},
                   {"kind": "concatenate", "outer": "b", "inner": "a"}]},
        {"nodes": [{"id": "a", "spec": "wire"}, {"id": "b", "spec": "wire"}], "edges": []},
    ])
    def test_bad_plans(self, plan):
        with pytest.raises(tasks.PlanError):
            tasks.CompositionPlan.from_dict(plan).build()


def test_plan_rejects_unknown_side():
    with pytest.raises(tasks.PlanError):
        tasks.CompositionPlan.from_dict({"nodes": [{"id": "a", "spec": "ring5", "side": "decoder"}], "edges": []})
