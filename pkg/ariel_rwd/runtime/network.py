"""
Link delays between tasks.
"""

import numpy as np

from ariel_rwd.ariel.deployment import DeploymentConfig
from ariel_rwd.runtime.scenario import DelayModel


class Network:
    """Delays drawn from one random stream; tasks on the same node talk with no delay."""

    def __init__(self, deployment: DeploymentConfig, model: DelayModel, rng: np.random.Generator):
        self.model = model
        self.rng = rng
        self._node = {t.task_id: t.node for t in deployment.tasks}

    def same_node(self, a: int, b: int) -> bool:
        return self._node.get(a) is not None and self._node.get(a) == self._node.get(b)

    def delay(self, src: int, dst: int) -> float:
        if self.same_node(src, dst):
            return 0.0
        return self.model.sample(self.rng)
