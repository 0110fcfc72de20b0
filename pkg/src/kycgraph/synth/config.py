"""Generator configuration with proportional scaling of count bounds.

All count ranges are stated at the 10,000-customer reference scale and
scaled linearly for other populations.  Determinism contract: the same
GenConfig produces byte-identical snapshot files.
"""

from __future__ import annotations

from dataclasses import dataclass, field, asdict

from .vocab import HIGH_RISK_JURISDICTIONS

REFERENCE_CUSTOMERS = 10_000


@dataclass(frozen=True)
class GenConfig:
    seed: int = 20_250_630
    n_customers: int = 10_000
    accounts_per_customer: tuple = (1, 4)
    n_transactions: tuple = (250_000, 500_000)  # at reference scale
    n_addresses: tuple = (15_000, 18_000)  # at reference scale
    sanction_rate: float = 0.02
    pep_rate: float = 0.01
    alert_rate: float = 0.05
    lookback_months: int = 24
    n_planted_rings: int | None = None  # default: max(3, n_customers // 500)
    ring_size: tuple = (3, 6)
    # artifact knobs (not part of the headline distribution)
    as_of: str = "2025-06-30T00:00:00Z"  # generation epoch; no wall clock
    high_risk_jurisdictions: tuple = HIGH_RISK_JURISDICTIONS
    high_risk_counterparty_share: float = 0.05
    internal_transfer_share: float = 0.08
    counterparties_per_customer: float = 0.03
    joint_account_rate: float = 0.0  # >0 plants joint accounts (tool fixtures)
    risk_mix: tuple = (0.70, 0.20, 0.10)  # LOW / MEDIUM / HIGH
    zipf_exponent: float = 1.1  # transaction-to-account assignment skew

    @property
    def scale(self) -> float:
        return self.n_customers / REFERENCE_CUSTOMERS

    def scaled_range(self, reference_range: tuple) -> tuple[int, int]:
        lo, hi = reference_range
        return (int(round(lo * self.scale)), int(round(hi * self.scale)))

    @property
    def transaction_bounds(self) -> tuple[int, int]:
        return self.scaled_range(self.n_transactions)

    @property
    def address_bounds(self) -> tuple[int, int]:
        return self.scaled_range(self.n_addresses)

    @property
    def account_bounds(self) -> tuple[int, int]:
        lo, hi = self.accounts_per_customer
        return (lo * self.n_customers, hi * self.n_customers)

    @property
    def planted_rings(self) -> int:
        if self.n_planted_rings is not None:
            return self.n_planted_rings
        if self.n_customers == 0:
            return 0
        return max(3, self.n_customers // 500)

    def validate(self) -> None:
        problems = []
        if self.n_customers < 0:
            problems.append("n_customers must be >= 0")
        for name in ("sanction_rate", "pep_rate", "alert_rate",
                     "high_risk_counterparty_share", "internal_transfer_share",
                     "joint_account_rate"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                problems.append(f"{name} must lie in [0, 1], got {value}")
        for name in ("accounts_per_customer", "n_transactions", "n_addresses",
                     "ring_size"):
            lo, hi = getattr(self, name)
            if lo > hi or lo < 0:
                problems.append(f"{name} range ({lo}, {hi}) is empty or negative")
        if self.accounts_per_customer[0] < 1 and self.n_customers:
            problems.append("accounts_per_customer minimum must be >= 1")
        if self.lookback_months < 1:
            problems.append("lookback_months must be >= 1")
        if abs(sum(self.risk_mix) - 1.0) > 1e-9:
            problems.append("risk_mix must sum to 1")
        if self.n_customers > 0:
            worst_members = self.planted_rings * self.ring_size[1]
            if self.ring_size[1] > self.n_customers or \
                    worst_members > self.n_customers:
                problems.append(
                    f"planted rings need up to {worst_members} distinct "
                    f"customers but only {self.n_customers} exist; lower "
                    f"n_planted_rings or ring_size")
            # every address needs a resident: ceiling of 1.8 addr/customer
            # still requires < 2 residence slots per customer on average
            if self.address_bounds[1] > 2 * self.n_customers:
                problems.append("n_addresses exceeds available residents")
        if problems:
            raise ValueError("; ".join(problems))

    def to_dict(self) -> dict:
        d = asdict(self)
        for key, value in d.items():
            if isinstance(value, tuple):
                d[key] = list(value)
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "GenConfig":
        kwargs = {}
        for key, value in data.items():
            if isinstance(value, list):
                value = tuple(value)
            kwargs[key] = value
        return cls(**kwargs)
