"""Metric properties: bounds, duality, monotonicity, exact conventions."""

from hypothesis import given, settings
from hypothesis import strategies as st

from kycgraph.agent.transcript import AgentTranscript, AnswerDocument
from kycgraph.evaluation import normalize_tokens, score_answer, \
    score_retrieval, token_f1

ids = st.sets(st.integers(min_value=0, max_value=50), max_size=20)


@given(retrieved=ids, relevant=ids)
@settings(max_examples=300)
def test_scores_bounded(retrieved, relevant):
    precision, recall = score_retrieval(retrieved, relevant)
    assert 0.0 <= precision <= 1.0
    assert 0.0 <= recall <= 1.0


@given(retrieved=ids, relevant=ids)
@settings(max_examples=300)
def test_duality_swap(retrieved, relevant):
    """Swapping the sets swaps the scores.

    The pinned empty-set conventions (recall of an empty relevant set is
    vacuously 1.0 while junk retrieval scores precision 0.0) are
    intentionally asymmetric, so duality is only claimed when the two sets
    are both empty or both non-empty.
    """
    if bool(retrieved) != bool(relevant):
        return
    precision, recall = score_retrieval(retrieved, relevant)
    swapped_precision, swapped_recall = score_retrieval(relevant, retrieved)
    assert precision == swapped_recall
    assert recall == swapped_precision


@given(retrieved=ids, relevant=st.sets(st.integers(0, 50), min_size=1,
                                       max_size=20))
@settings(max_examples=300)
def test_adding_relevant_record_never_decreases(retrieved, relevant):
    precision, recall = score_retrieval(retrieved, relevant)
    addition = sorted(relevant - retrieved) or sorted(relevant)
    grown = retrieved | {addition[0]}
    new_precision, new_recall = score_retrieval(grown, relevant)
    assert new_precision >= precision or grown == retrieved
    assert new_recall >= recall


@given(retrieved=ids, relevant=ids)
@settings(max_examples=300)
def test_adding_irrelevant_never_increases_precision(retrieved, relevant):
    precision, _ = score_retrieval(retrieved, relevant)
    junk = max(relevant | retrieved | {0}) + 1
    new_precision, _ = score_retrieval(retrieved | {junk}, relevant)
    assert new_precision <= precision


def test_exact_conventions():
    assert score_retrieval(set(), set()) == (1.0, 1.0)
    assert score_retrieval(set(), {"a"}) == (0.0, 0.0)
    assert score_retrieval({"a"}, set()) == (0.0, 1.0)
    assert score_retrieval({"a", "b"}, {"a", "b"}) == (1.0, 1.0)
    assert score_retrieval({"a", "b", "c", "d"}, {"a", "b"}) == (0.5, 1.0)


def test_normalization_canonicalizes_numbers_and_case():
    assert normalize_tokens("Balance is 1200.50 USD") == \
        normalize_tokens("balance 1200.5 usd")
    assert "the" not in normalize_tokens("the customer")


def test_token_f1_identities():
    assert token_f1("", "") == 1.0
    assert token_f1("something", "") == 0.0
    assert token_f1("", "reference") == 0.0
    assert token_f1("customer CUST000001 risk HIGH",
                    "customer CUST000001 risk HIGH") == 1.0
    assert 0.0 < token_f1("customer CUST000001 risk HIGH",
                          "customer CUST000001 risk LOW") < 1.0


def _transcript_with_payload(payload):
    transcript = AgentTranscript(question="q")
    transcript.add_step("execute_cypher", {"query": "MATCH ..."},
                        {"jsonrpc": "2.0", "id": 1,
                         "result": {"tool": "execute_cypher",
                                    "payload": payload, "record_ids": []}},
                        1.0)
    return transcript


def test_score_answer_verbatim_is_perfect():
    answer = AnswerDocument("Customer CUST000001 has risk level HIGH.",
                            ["risk_level = HIGH"], [])
    transcript = _transcript_with_payload(
        {"columns": ["risk_level"], "rows": [["HIGH"]]})
    transcript.answer = answer
    ground_truth = "Customer CUST000001 has risk level HIGH. risk_level = HIGH"
    faithfulness, relevancy, method = score_answer(answer, transcript,
                                                   ground_truth)
    assert (faithfulness, relevancy, method) == (1.0, 1.0, "deterministic")


def test_score_answer_empty_is_zero():
    faithfulness, relevancy, _ = score_answer(None, None, "anything")
    assert (faithfulness, relevancy) == (0.0, 0.0)
    empty = AnswerDocument("", [], [])
    transcript = _transcript_with_payload({})
    transcript.answer = empty
    faithfulness, relevancy, _ = score_answer(empty, transcript, "anything")
    assert (faithfulness, relevancy) == (0.0, 0.0)


def test_score_answer_partial_grounding():
    answer = AnswerDocument("Customer has 3 accounts.",
                            ["account_count = 3", "hidden_count = 99"], [])
    transcript = _transcript_with_payload(
        {"columns": ["account_count"], "rows": [[3]]})
    transcript.answer = answer
    faithfulness, _, _ = score_answer(answer, transcript, "irrelevant")
    assert faithfulness == 0.5
