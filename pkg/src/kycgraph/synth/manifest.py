"""Ground-truth manifest: the generator-side record of what was planted.

Every number in the manifest must be recomputable from the generated graph
by a query; the manifest and the graph never disagree (tested).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class RingEntry:
    ring_id: str
    mechanism: str  # shared-address | shared-phone | circular-transactions
    members: list  # sorted customer IDs
    identifier: dict  # mechanism-specific evidence (address/phone/txn ids)

    def to_dict(self) -> dict:
        return {"ring_id": self.ring_id, "mechanism": self.mechanism,
                "members": self.members, "identifier": self.identifier}


@dataclass
class CustomerFacts:
    accounts: int = 0
    transactions: int = 0
    sanctions: int = 0
    peps: int = 0
    alerts: int = 0
    high_risk_transactions: int = 0
    risk_level: str = "LOW"

    def to_dict(self) -> dict:
        return {"accounts": self.accounts, "transactions": self.transactions,
                "sanctions": self.sanctions, "peps": self.peps,
                "alerts": self.alerts,
                "high_risk_transactions": self.high_risk_transactions,
                "risk_level": self.risk_level}


@dataclass
class GroundTruthManifest:
    seed: int
    config: dict
    counts: dict = field(default_factory=dict)
    rings: list = field(default_factory=list)  # of RingEntry
    customers: dict = field(default_factory=dict)  # id -> CustomerFacts

    def ring_member_sets(self) -> list[frozenset]:
        return [frozenset(ring.members) for ring in self.rings]

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "config": self.config,
            "counts": dict(sorted(self.counts.items())),
            "rings": [ring.to_dict() for ring in self.rings],
            "customers": {cid: facts.to_dict()
                          for cid, facts in sorted(self.customers.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1)

    def save(self, path: str) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json())
            fh.write("\n")

    @classmethod
    def from_dict(cls, data: dict) -> "GroundTruthManifest":
        manifest = cls(seed=data["seed"], config=data["config"],
                       counts=dict(data["counts"]))
        manifest.rings = [RingEntry(r["ring_id"], r["mechanism"],
                                    list(r["members"]), dict(r["identifier"]))
                          for r in data["rings"]]
        manifest.customers = {
            cid: CustomerFacts(**facts) for cid, facts in data["customers"].items()}
        return manifest

    @classmethod
    def load(cls, path: str) -> "GroundTruthManifest":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))
