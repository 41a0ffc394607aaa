"""Community keyword extraction and document-type profiles.

Candidate terms are unigrams and bigrams over title and abstract tokens,
counted by document frequency. Scoring contrasts a community against the
whole corpus with a smoothed log-odds of relative document frequency:

    score(t) = (f_c/n_c) * log2( ((f_c+a)/(n_c+a)) / ((f_G-f_c+a)/(n-n_c+a)) )

with smoothing a = 0.5. The stopword list below is fixed and versioned;
it is part of the extraction interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .corpus import Corpus, DocType, DOC_TYPES, tokenize
from .errors import GraphError
from .graph import CitationGraph
from .community import Partition

SMOOTHING = 0.5

# Fixed English stopword list (v1). Order is irrelevant; membership is the
# contract.
STOPWORDS = frozenset("""
a about above after again against all also although am among an and any
are as at be because been before being below between both but by can
cannot could did do does doing down during each either etc few for from
further had has have having he her here hers herself him himself his how
however i if in into is it its itself just may me might more most much
must my myself neither no nor not of off often on once only onto or
other our ours ourselves out over own per rather same she should since
so some such than that the their theirs them themselves then there
therefore these they this those through thus to too toward under until
up upon us very via was we well were what when where whether which while
who whom whose why will with within without would you your yours
yourself yourselves
already amongst another anyone anything around away become becomes
behind beside besides beyond came come done due else elsewhere even ever
every instead made make many moreover one ones otherwise said still take
taken two use used using yet
""".split())


@dataclass(frozen=True)
class TermStats:
    """One scored term for one community."""

    term: str
    community: int
    community_df: int
    global_df: int
    score: float


@dataclass(frozen=True)
class CommunityProfile:
    """Per-community summary: ranked terms, size, core share, mean
    undirected degree, and document-type percentages (sum to 100)."""

    community: int
    size: int
    core_pct: float
    average_degree: float
    type_pcts: dict[DocType, float]
    top_terms: tuple[TermStats, ...]


def _document_terms(title: str, abstract: str) -> set[str]:
    """Candidate unigrams and bigrams of one document. Bigrams are formed
    within each field; a bigram is dropped if either token is a stopword."""
    terms: set[str] = set()
    for text in (title, abstract):
        tokens = tokenize(text)
        for tok in tokens:
            if tok not in STOPWORDS:
                terms.add(tok)
        for t1, t2 in zip(tokens, tokens[1:]):
            if t1 not in STOPWORDS and t2 not in STOPWORDS:
                terms.add(f"{t1} {t2}")
    return terms


def term_candidates(corpus: Corpus, ids) -> dict[str, int]:
    """Document frequency of candidate terms over the given documents
    (each document contributes at most 1 per term)."""
    counts: dict[str, int] = {}
    for doc_id in ids:
        doc = corpus[doc_id]
        for term in _document_terms(doc.title, doc.abstract):
            counts[term] = counts.get(term, 0) + 1
    return counts


def term_score(community_df: int, global_df: int, community_size: int,
               corpus_size: int, alpha: float = SMOOTHING) -> float:
    """Smoothed log-odds relative-frequency score of one term."""
    rate_in = (community_df + alpha) / (community_size + alpha)
    rate_out = (global_df - community_df + alpha) / (corpus_size - community_size + alpha)
    return (community_df / community_size) * math.log2(rate_in / rate_out)


def score_terms(community_counts: dict[str, int], global_counts: dict[str, int],
                community_size: int, corpus_size: int,
                community: int = 0, alpha: float = SMOOTHING) -> list[TermStats]:
    """Rank a community's candidate terms, best first. Ties go to the
    higher community frequency, then lexicographic order."""
    if community_size < 1:
        raise GraphError("community must have at least one document")
    scored = [
        TermStats(term=term, community=community, community_df=df,
                  global_df=global_counts.get(term, df),
                  score=term_score(df, global_counts.get(term, df),
                                   community_size, corpus_size, alpha))
        for term, df in community_counts.items()
    ]
    scored.sort(key=lambda ts: (-ts.score, -ts.community_df, ts.term))
    return scored


def community_profiles(corpus: Corpus, graph: CitationGraph,
                       partition: Partition, k: int = 5) -> list[CommunityProfile]:
    """Build one profile per community, ordered by community id (canonical
    ids are already ordered by descending size)."""
    if partition.nodes() != set(graph.nodes):
        raise GraphError("partition does not cover the graph's node set")
    global_counts = term_candidates(corpus, sorted(corpus.ids()))
    corpus_size = len(corpus)

    profiles = []
    for cid in partition.community_ids:
        members = sorted(partition.members(cid))
        size = len(members)
        counts = term_candidates(corpus, members)
        ranked = score_terms(counts, global_counts, size, corpus_size,
                             community=cid)
        core_count = sum(1 for u in members if graph.in_core(u))
        avg_degree = sum(graph.undirected_degree(u) for u in members) / size
        type_counts = {dt: 0 for dt in DOC_TYPES}
        for u in members:
            type_counts[corpus[u].doc_type] += 1
        type_pcts = {dt: 100.0 * c / size for dt, c in type_counts.items()}
        profiles.append(CommunityProfile(
            community=cid,
            size=size,
            core_pct=100.0 * core_count / size,
            average_degree=avg_degree,
            type_pcts=type_pcts,
            top_terms=tuple(ranked[:k]),
        ))
    return profiles
