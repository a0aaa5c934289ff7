"""Smoke test for the redukto extension module."""

import redukto

names = [n for n, _, _ in redukto.catalog()]
assert "m_e" in names and "anbn_gnf" in names, names

m_e = redukto.Automaton.catalog("m_e")
run = m_e.run("aaaa")
assert run["outcome"] == "accept", run
assert run["cycles"][0] == (["a", "a", "a", "a"], ["a", "a", "b"]), run["cycles"]
assert m_e.run("aaa")["outcome"] == "reject"
assert m_e.decide("b", kind="basic")[0] == "member"
assert m_e.enumerate(max_len=8) == [["a"], ["a", "a"], ["a"] * 4, ["a"] * 8]

mono = m_e.check("mono", max_len=8)
assert not mono["holds"] and mono["word"] == ["a"] * 4, mono
assert redukto.Automaton.catalog("dyck1").check("mono", max_len=10)["holds"]

copy = redukto.Automaton.parse(m_e.render())
assert copy.enumerate(max_len=8) == m_e.enumerate(max_len=8)

g = redukto.Grammar.catalog("anbn_gnf")
built, report = g.build_hrrwwc(window=3)
assert "(1,a) (2,a) (3,b) -> (2,a)" in report, report
verdict, witness = built.decide("aabb", kind="hproper")
assert verdict == "member" and witness == ["(1,a)", "(2,a)", "(3,b)", "(3,b)"], witness
assert redukto.compare(built, g, max_len=12, first_kind="hproper") is None

try:
    g.build_hrrwwc(window=2)
    raise AssertionError("window 2 should fail")
except redukto.ReduktoError:
    pass

shrunk = redukto.Automaton.catalog("m_e_h").to_shrinking()
assert not shrunk.check("det")["holds"]
assert shrunk.check("shrink", max_len=6)["holds"]

assert m_e.decide("aaaaaaaa", limits="configs=2")[0] == "resource exceeded"
assert m_e.run("aaaaaaaa", limits="configs=2")["outcome"] == "limit exceeded"
try:
    m_e.enumerate(max_len=8, limits="configs=2")
    raise AssertionError("limits should be exceeded")
except redukto.ResourceExceeded:
    pass

try:
    redukto.Automaton.parse("name bad\nwindow 2\ntrans q0 a a => accept\n")
    raise AssertionError("syntax error expected")
except redukto.ReduktoError as e:
    assert "3" in str(e), e

print("smoke test passed")
