import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from seqdict import auxstructs, osa, osm, oss, seqopt
from seqdict.fileio import (
    decode_rational,
    encode_rational,
    instance_kind,
    load_instance_text,
    parse_instance,
    serialize_instance,
)

GENERATORS = {
    "osm": lambda n, s: osm.random_matching_instance(n, s),
    "osa": lambda n, s: osa.random_digraph_instance(n, s),
    "oss": lambda n, s: oss.random_sat_instance(n, 2 * n, 3, s),
    "osi": lambda n, s: auxstructs.random_osi_instance(n, s),
    "paths": lambda n, s: auxstructs.random_paths_instance(n, s),
    "lowerbound": lambda n, s: seqopt.random_lower_bound_instance(n, min(2, n), s),
}


class TestRationals:
    @given(st.integers(0, 10 ** 12), st.integers(1, 10 ** 9))
    def test_round_trip(self, p, q):
        v = Fraction(p, q)
        assert decode_rational(encode_rational(v)) == v

    def test_floats_rejected(self):
        with pytest.raises(ValueError):
            decode_rational(0.5)


class TestRoundTrip:
    @pytest.mark.parametrize("kind", sorted(GENERATORS))
    def test_all_kinds(self, kind):
        for seed in range(25):
            inst = GENERATORS[kind](2 + seed % 4, seed)
            assert instance_kind(inst) == kind
            assert parse_instance(serialize_instance(inst)) == inst

    def test_serialization_deterministic(self):
        inst = osm.random_matching_instance(4, seed=1)
        assert serialize_instance(inst) == serialize_instance(inst)

    def test_no_floats_in_files(self):
        inst = osm.random_matching_instance(4, seed=2)
        doc = json.loads(serialize_instance(inst))

        def walk(x):
            assert not isinstance(x, float)
            if isinstance(x, dict):
                for v in x.values():
                    walk(v)
            elif isinstance(x, list):
                for v in x:
                    walk(v)

        walk(doc)


class TestParsing:
    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unknown instance kind"):
            parse_instance('{"schema_version": 1, "kind": "nope", "n": 1}')

    def test_wrong_schema_version_rejected(self):
        with pytest.raises(ValueError, match="schema_version"):
            parse_instance('{"schema_version": 2, "kind": "osi", "n": 1, "edges": []}')

    def test_wcnf_sniffing(self):
        inst = oss.posd_sat_instance(Fraction(1, 10))
        assert load_instance_text(oss.to_wcnf(inst)) == inst
        assert load_instance_text(serialize_instance(inst)) == inst

    def test_garbage_rejected(self):
        with pytest.raises(ValueError):
            load_instance_text("<xml/>")
