"""
Parameters of the redundant-watchdog models.
"""

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator

from ariel_rwd.ariel.compiler import policy_threshold
from ariel_rwd.config import Config
from ariel_rwd.gspn.net import Server


class RwdParams(BaseModel):
    """
    Rates are per time unit. `policy` is "OR", "AND" or a k-out-of-n form
    such as "2oo3"; it is stored in canonical spelling.
    """

    model_config = ConfigDict(frozen=True)

    n_replicas: int = Field(3, ge=1)
    rate_activity: float = Field(2.0, gt=0)
    rate_fault: float = Field(0.1, gt=0)
    rate_cycle: float = Field(1.0, gt=0)
    rate_repair: float = Field(1.0, gt=0)
    rate_timeout: float = Field(1.0, gt=0)
    timeout_server: Server = Server.INFINITE
    policy: str = "OR"

    @field_validator("policy")
    @classmethod
    def _canonical_policy(cls, value: str, info: ValidationInfo) -> str:
        n = info.data.get("n_replicas")
        if n is None:
            raise ValueError("n_replicas is invalid")
        key = value.strip().upper()
        threshold = policy_threshold(key, n)
        return key if key in ("AND", "OR") else f"{threshold}oo{n}"

    @property
    def threshold(self) -> int:
        """Expired watchdogs needed to raise the alarm."""
        return policy_threshold(self.policy, self.n_replicas)

    def with_policy(self, policy: str) -> "RwdParams":
        return RwdParams(**{**self.model_dump(), "policy": policy})

    def with_timeout(self, rate: float) -> "RwdParams":
        return RwdParams(**{**self.model_dump(), "rate_timeout": rate})

    @classmethod
    def from_config(cls, config: Config, **overrides) -> "RwdParams":
        """Defaults from the `[rwd]` section, then `overrides`."""
        section = config.section("rwd")
        values = {name: section[name] for name in cls.model_fields if name in section}
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)
