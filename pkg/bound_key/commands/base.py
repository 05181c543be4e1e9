import abc

from bound_key.reports.report import Report
from bound_key.utils.config import RunConfig


class BaseCommand(abc.ABC):
    """A CLI command: takes a validated RunConfig and returns a Report.

    Failed checks are recorded on the report; errors in the computation itself
    propagate as BoundKeyError.
    """

    name: str = ""
    description: str = ""

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} name={self.name!r}>"

    def new_report(self, config: RunConfig) -> Report:
        return Report(command=self.name, parameters=config.parameters())

    @abc.abstractmethod
    def run(self, config: RunConfig) -> Report:
        raise NotImplementedError()
