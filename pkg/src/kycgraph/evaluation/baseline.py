"""Vector-retrieval baseline: flattened customer documents, hashed
term-frequency embeddings, cosine top-k.

One document per customer holds the flattened text of the customer node
and its 1-hop neighborhood, and carries the record-ID set it encodes so
retrieval can be scored on the same record scale as the graph system.
The embedding is a deterministic term-frequency vector over a hashed
vocabulary (fixed dimension, fixed hash seed): textual similarity only, no
graph structure, which is exactly the baseline's point.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .metrics import score_retrieval, token_f1
from ..agent.transcript import AnswerDocument
from ..store import PropertyGraph

EMBED_DIM = 4096
HASH_SEED = b"kycgraph-tf-v1"
DEFAULT_TOP_K = 5


def hash_token(token: str) -> int:
    digest = hashlib.blake2b(token.encode("utf-8"), key=HASH_SEED,
                             digest_size=8).digest()
    return int.from_bytes(digest, "big") % EMBED_DIM


def embed_text(text: str) -> np.ndarray:
    vector = np.zeros(EMBED_DIM, dtype=np.float32)
    for token in text.casefold().split():
        token = token.strip(".,:;!?()[]{}'\"")
        if token:
            vector[hash_token(token)] += 1.0
    norm = float(np.linalg.norm(vector))
    if norm > 0:
        vector /= norm
    return vector


def _flatten_props(props: dict) -> str:
    parts = []
    for name in sorted(props):
        value = props[name]
        if isinstance(value, list):
            parts.append(f"{name} {' '.join(str(v) for v in value)}")
        else:
            parts.append(f"{name} {value}")
    return " ".join(parts)


class DocCorpus:
    """Flattened per-customer documents plus their TF matrix."""

    def __init__(self, doc_ids: list, texts: list, record_sets: list,
                 snapshot_digest: str):
        self.doc_ids = doc_ids
        self.texts = texts
        self.record_sets = [sorted(records) for records in record_sets]
        self.snapshot_digest = snapshot_digest
        matrix = np.zeros((len(texts), EMBED_DIM), dtype=np.float32)
        for i, text in enumerate(texts):
            matrix[i] = embed_text(text)
        self.matrix = matrix

    def __len__(self) -> int:
        return len(self.doc_ids)

    @classmethod
    def build(cls, graph: PropertyGraph) -> "DocCorpus":
        doc_ids, texts, record_sets = [], [], []
        for customer in graph.nodes("Customer"):
            records = {customer.business_id}
            lines = [f"customer {customer.business_id} "
                     f"{_flatten_props(customer.properties)}"]
            for edge, far in graph.neighbors(customer.key, "both"):
                records.add(far.business_id)
                lines.append(f"{edge.edge_type.lower().replace('_', ' ')} "
                             f"{far.label.lower()} {far.business_id} "
                             f"{_flatten_props(far.properties)}")
            doc_ids.append(customer.business_id)
            texts.append(" | ".join(lines))
            record_sets.append(records)
        return cls(doc_ids, texts, record_sets, graph.digest())

    def top_k(self, question: str, k: int) -> list:
        """Indices of the k most similar documents (stable tie order)."""
        if k <= 0 or not len(self):
            return []
        scores = self.matrix @ embed_text(question)
        order = np.argsort(-scores, kind="stable")
        return [int(i) for i in order[:k]]

    def to_dict(self) -> dict:
        return {"doc_ids": self.doc_ids, "texts": self.texts,
                "record_sets": self.record_sets,
                "snapshot_digest": self.snapshot_digest}

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_dict(), fh, sort_keys=True)

    @classmethod
    def load(cls, path: str) -> "DocCorpus":
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        return cls(data["doc_ids"], data["texts"],
                   [set(r) for r in data["record_sets"]],
                   data["snapshot_digest"])


def _format_vector_answer(question: str, corpus: DocCorpus,
                          picks: list) -> AnswerDocument:
    """Answer assembled from the retrieved documents alone: it can quote
    them but cannot traverse beyond them."""
    if not picks:
        return AnswerDocument(
            direct_answer="No documents were retrieved for this question.",
            supporting_details=[],
            key_findings=["retrieval returned nothing"])
    headline = corpus.texts[picks[0]].split(" | ")[0]
    details = [corpus.texts[i][:240] for i in picks]
    return AnswerDocument(
        direct_answer=f"Based on the most similar document: {headline}.",
        supporting_details=details,
        key_findings=[f"top documents: "
                      f"{', '.join(corpus.doc_ids[i] for i in picks)}"])


def run_vector_baseline(questions: list, corpus: DocCorpus,
                        k: int = DEFAULT_TOP_K) -> list:
    """Per-question scoring records for the vector system."""
    if not len(corpus):
        raise ValueError("empty document corpus")
    records = []
    for question in questions:
        picks = corpus.top_k(question.question, k)
        retrieved: set = set()
        for i in picks:
            retrieved.update(corpus.record_sets[i])
        precision, recall = score_retrieval(retrieved,
                                            set(question.relevant_ids))
        answer = _format_vector_answer(question.question, corpus, picks)
        answer_text = " ".join([answer.direct_answer] +
                               answer.supporting_details)
        relevancy = token_f1(answer_text, question.answer_text)
        # the vector answer only ever quotes retrieved documents, so the
        # deterministic grounding audit is 1.0 by construction
        records.append({
            "qid": question.qid, "level": question.level,
            "qtype": question.qtype,
            "faithfulness": 1.0,
            "answer_relevancy": relevancy,
            "context_precision": precision,
            "context_recall": recall,
            "method": "deterministic",
            "retrieved_count": len(retrieved),
            "top_doc_ids": [corpus.doc_ids[i] for i in picks],
        })
    return records
