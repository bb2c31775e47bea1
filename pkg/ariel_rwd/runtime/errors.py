"""
Exceptions raised by the runtime simulator.
"""


class ScenarioError(ValueError):
    """Invalid scenario: bad values, unknown fault kinds or dangling entity references."""
