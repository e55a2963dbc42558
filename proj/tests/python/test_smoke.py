# Copyright 2026 The boundsem Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Smoke tests for the Python bindings."""

import os

import pytest

import boundsem

CONVERGENCE = r"/\{n in N} \/{m in N} /\{k in N} D_n(c_m, c_{max(m, k)})"
DATA = os.environ.get("BOUNDSEM_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_parse_and_classify():
    f = boundsem.parse_formula(CONVERGENCE)
    assert f.prenex_class == "PiN(3)"
    assert not f.is_first_order
    assert boundsem.classify(r"\/{m in N} D_m(c_0, c_m)") == "SigmaN(1)"
    assert boundsem.parse_formula("forall x. D_1(x, y)").free_vars == {"y"}


def test_parse_error_carries_position():
    with pytest.raises(boundsem.ParseError, match="at 0"):
        boundsem.parse_formula("P(")


def test_bounded_eval_and_compile_agree():
    fam = boundsem.load_family(os.path.join(DATA, "settling.fam"))
    f = boundsem.parse_formula(r"/\{n in N} \/{m in N} D_n(c_m, c_{m+1})")
    pair = boundsem.fragment_of("nat:2", "nat:3", f)
    assert boundsem.is_decisive(f, pair)
    g = boundsem.compile_fo(f, pair)
    assert g.is_first_order
    for s in fam.structures:
        assert boundsem.eval_bounded(s, f, pair) == boundsem.eval_fo(s, g)
    assert boundsem.DecisivePair(str(pair)) == pair


def test_non_decisive_pair_rejected():
    f = boundsem.parse_formula(r"~D_1(c_0, c_1)")
    with pytest.raises(boundsem.PreconditionError):
        boundsem.eval_bounded(boundsem.sequence_family("parity", 0, 0, 0).structures[0], f,
                              boundsem.DecisivePair("(fn) *"))


def test_metastability_alternating_and_parity():
    alternating = boundsem.sequence_family("paper", 0, 39, 20)
    succ = "mono:" + ",".join(f"{m}->{m + 1}" for m in range(41))
    r = boundsem.check_metastable(alternating, "1/2", succ, 20)
    assert r["winner"] == "m=0"
    assert r["candidates"][0]["sat"] == list(range(2, 40))
    via = boundsem.check_family(alternating, boundsem.parse_formula(CONVERGENCE), "pair:2;" + succ, 20)
    assert via["winner"] == "E=0"

    parity = boundsem.sequence_family("parity", 0, 39, 20)
    r = boundsem.check_metastable(parity, "1/2", succ, 20)
    assert r["winner"] is None
    assert all(not c["sat"] for c in r["candidates"])
    assert "winner none" in r["machine"]


def test_bounds_helpers():
    assert boundsem.bound_class("pair:3;mono:0->1,5->9", "nat:2") == "PiN(3)"
    assert boundsem.normalize_bound("pair:1;mono:0->1;mono:0->4") == "pair:1;mono:0->4"
    with pytest.raises(boundsem.ParseError):
        boundsem.bound_class("pair:x", "nat:1")
