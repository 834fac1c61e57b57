import pytest

from polyrec.corpus import Topic
from polyrec.expansion import RunConfig, build_query, render_query
from polyrec.recommender import Suggestion


TOPIC = Topic("t1", ("retirement", "health"))
TE = [
    Suggestion("social politics", "controlled_term", 0.4),
    Suggestion("elderly people", "controlled_term", 0.3),
]
AE = [
    Suggestion("Richard Hauser", "author", 0.5),
    Suggestion("Gerhard Bäcker", "author", 0.4),
]


class TestRunConfig:
    def test_parse_round_trip(self):
        for config in RunConfig:
            assert RunConfig.parse(str(config)) is config

    def test_parse_is_case_insensitive(self):
        assert RunConfig.parse(" B+TE ") is RunConfig.TERM_EXPANSION

    def test_parse_rejects_unknown(self):
        with pytest.raises(ValueError, match="unknown run configuration"):
            RunConfig.parse("b+x")

    def test_flags(self):
        assert not RunConfig.BASELINE.includes_terms
        assert RunConfig.TERM_EXPANSION.includes_terms
        assert RunConfig.AUTHOR_EXPANSION.includes_authors
        assert RunConfig.FULL.includes_terms and RunConfig.FULL.includes_authors


class TestBuildQuery:
    def test_baseline_clauses(self):
        query = build_query(TOPIC, TE, AE, RunConfig.BASELINE)
        assert set(query.clauses) == {
            ("TI", "retirement"), ("AB", "retirement"),
            ("TI", "health"), ("AB", "health"),
        }
        assert query.te_terms == () and query.ae_names == ()

    def test_term_expansion_clauses(self):
        query = build_query(TOPIC, TE, AE, RunConfig.TERM_EXPANSION)
        tokens = {"retirement", "health", "social", "politics", "elderly", "people"}
        expected = {("TI", t) for t in tokens} | {("AB", t) for t in tokens}
        expected |= {("CT", v) for v in
                     ("retirement", "health", "social politics", "elderly people")}
        assert set(query.clauses) == expected

    def test_author_expansion_clauses(self):
        query = build_query(TOPIC, TE, AE, RunConfig.AUTHOR_EXPANSION)
        baseline = build_query(TOPIC, TE, AE, RunConfig.BASELINE)
        assert set(query.clauses) == set(baseline.clauses) | {
            ("AU", "Richard Hauser"), ("AU", "Gerhard Bäcker")}

    def test_full_is_union(self):
        full = build_query(TOPIC, TE, AE, RunConfig.FULL)
        te = build_query(TOPIC, TE, AE, RunConfig.TERM_EXPANSION)
        ae = build_query(TOPIC, TE, AE, RunConfig.AUTHOR_EXPANSION)
        assert set(full.clauses) == set(te.clauses) | set(ae.clauses)

    def test_baseline_subset_of_expansions(self):
        baseline = set(build_query(TOPIC, TE, AE, RunConfig.BASELINE).clauses)
        for config in (RunConfig.TERM_EXPANSION, RunConfig.AUTHOR_EXPANSION, RunConfig.FULL):
            assert baseline <= set(build_query(TOPIC, TE, AE, config).clauses)

    def test_clauses_deduplicated(self):
        te = [Suggestion("health policy", "controlled_term", 0.2)]
        query = build_query(TOPIC, te, [], RunConfig.TERM_EXPANSION)
        assert len(query.clauses) == len(set(query.clauses))
        assert ("TI", "health") in query.clauses  # from base and expansion alike

    def test_missing_te_is_error(self):
        with pytest.raises(ValueError, match="thesaurus-term expansion"):
            build_query(TOPIC, [], AE, RunConfig.TERM_EXPANSION)

    def test_missing_ae_is_error(self):
        with pytest.raises(ValueError, match="author expansion"):
            build_query(TOPIC, TE, [], RunConfig.AUTHOR_EXPANSION)

    def test_clause_order_is_canonical(self):
        query = build_query(TOPIC, TE, AE, RunConfig.FULL)
        assert query.clauses == tuple(
            sorted(query.clauses,
                   key=lambda c: ({"TI": 0, "AB": 1, "CT": 2, "AU": 3}[c[0]], c[1])))


class TestRenderQuery:
    def test_baseline_single_line(self):
        query = build_query(TOPIC, TE, AE, RunConfig.BASELINE)
        assert render_query(query) == "TI/AB = (health OR retirement)"

    def test_full_three_lines(self):
        query = build_query(TOPIC, TE, AE, RunConfig.FULL)
        assert render_query(query) == (
            'TI/AB = ("elderly people" OR health OR retirement OR "social politics")\n'
            'OR CT = ("elderly people" OR health OR retirement OR "social politics")\n'
            'OR AU = ("Gerhard Bäcker" OR "Richard Hauser")'
        )

    def test_single_author_group(self):
        query = build_query(TOPIC, [], AE[:1], RunConfig.AUTHOR_EXPANSION)
        lines = render_query(query).splitlines()
        assert lines[1] == 'OR AU = ("Richard Hauser")'

    def test_empty_clauses_render_empty(self):
        from polyrec.expansion import ExpandedQuery
        assert render_query(ExpandedQuery("t", (), (), (), ())) == ""

    def test_distinct_clause_sets_render_differently(self):
        one = build_query(TOPIC, TE, AE, RunConfig.TERM_EXPANSION)
        other = build_query(TOPIC, TE[:1], AE, RunConfig.TERM_EXPANSION)
        assert set(one.clauses) != set(other.clauses)
        assert render_query(one) != render_query(other)
