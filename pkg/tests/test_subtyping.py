"""Subtyping coincides with the safe fixpoints of type propagation."""
import pytest

from refinement import is_safe


def _counterexamples(lat, pool):
    out = []
    for t1 in pool:
        for t2 in pool:
            sub = lat.subtype(t1, t2)
            fixed = lat.prop(t1, t2) == (t1, t2) and is_safe(t1) and is_safe(t2)
            if sub != fixed:
                out.append((t1, t2, sub))
    return out


class TestPropagationFixpoints:
    def test_pool_sizes(self, pred_types):
        assert len(pred_types.ints) == 3
        assert len(pred_types.shallow) == 21
        assert len(pred_types.nested) == 66

    def test_base_types_and_single_tables(self, pred_types):
        pool = pred_types.ints + pred_types.shallow
        assert _counterexamples(pred_types.lattice, pool) == []

    @pytest.mark.slow
    def test_nested_tables(self, pred_types):
        pool = [pred_types.ints[0]] + pred_types.nested
        assert _counterexamples(pred_types.lattice, pool) == []

    def test_contravariance_is_witnessed(self, pred_types):
        lat = pred_types.lattice
        ints = pred_types.ints
        wide_in = [f for f in pred_types.shallow if f.table and f.table[0][1] == (ints[1], ints[0])]
        narrow_in = [f for f in pred_types.shallow if f.table and f.table[0][1] == (ints[2], ints[0])]
        assert wide_in and narrow_in
        assert lat.subtype(wide_in[0], narrow_in[0])
        assert not lat.subtype(narrow_in[0], wide_in[0])
