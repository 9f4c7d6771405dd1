import logging
from abc import ABC
from typing import Any

logger = logging.getLogger(__name__)


class AbstractCallback(ABC):
    """Another class inheriting ``AbstractCallback`` can overwrite one
    or more of the class methods.

    The callback can then be passed to the simulation drivers in
    :mod:`confball.sim.study`.
    """

    def on_function(self, name: str):
        """Called every time the simulation switches to another test
        function.

        :type name: str
        """

    def on_replicate(self, index: int, record: Any):
        """Called once per finished replicate, in replicate order.

        :param index: Index of the replicate.
        :type index: int
        :param record: The
            :class:`~confball.sim.study.ReplicateRecord` of the
            replicate.
        """

    def on_study_end(self, report: Any):
        """Called once with the final report of a study.

        :param report: Report returned by the simulation driver.
        """


class LoggingCallback(AbstractCallback):
    """Logs the progress of a simulation at level ``INFO``.

    :param every: Number of replicates between two log messages.,
        defaults to 100
    :type every: int, optional
    """

    def __init__(self, every: int = 100):
        self._every = max(int(every), 1)
        self._current = ""

    def on_function(self, name: str):
        self._current = name
        logger.info("Simulating function %s", name)

    def on_replicate(self, index: int, record: Any):
        if (index + 1) % self._every == 0:
            logger.info("%s: %d replicates done", self._current, index + 1)

    def on_study_end(self, report: Any):
        logger.info("Study finished")
