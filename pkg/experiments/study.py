"""This python module is an appendix to the package confball.

It contains the class ConfballExperiment that reproduces the numerical
study of the dyadic trigonometric family: the table of squared radii
and selection counts, the dependence of the radii on the test level and
Monte Carlo estimates of the coverage of the confidence balls.
"""

import os
import time
from timeit import default_timer as Timer
from typing import Optional, Sequence

import pandas as pd

from context import confball


class ConfballExperiment:
    """Runs the simulation study of ``confball`` and collects its
    results in pandas DataFrames.

    :param config: Simulation settings. The defaults reproduce the
        setup with ``n = 1000``, ``alpha = 0.2``, ``beta = 0.1``,
        ``K = 8`` and 100 replicates., defaults to None
    :type config: confball.sim.SimulationConfig, optional
    :param verbose: If ``True``, print the progress to the console.,
        defaults to True
    :type verbose: bool, optional
    """

    coverage_header_names = [
        "Function",
        "Replicates",
        "Coverage",
        "Intersection",
        "CI low",
        "Time",
    ]

    def __init__(
        self,
        config: Optional[confball.sim.SimulationConfig] = None,
        verbose: bool = True,
    ):
        if config is None:
            config = confball.sim.SimulationConfig()
        self._config = config
        self._verbose = verbose
        self._report: Optional[confball.sim.Table1Report] = None
        self._table: Optional[pd.DataFrame] = None
        self._alphas: Optional[pd.DataFrame] = None
        self._coverage = pd.DataFrame(columns=self.coverage_header_names)

    def table(self) -> pd.DataFrame:
        """Squared radii of all models and the number of replicates in
        which each model is the smallest accepted one.
        """
        start = Timer()
        callbacks = [confball.core.callback.LoggingCallback(every=25)]
        self._report = confball.sim.run_table1(self._config, callbacks)
        self._table = self._report.table
        if self._verbose:
            print(f"Table finished after {Timer() - start:.1f}s")
            print(self._table.to_string(index=False))
        return self._table

    def alpha_sensitivity(
        self,
        alphas: Sequence[float] = (0.2, 0.15, 0.1),
    ) -> pd.DataFrame:
        self._alphas = confball.sim.alpha_sensitivity(alphas, self._config)
        if self._verbose:
            print(self._alphas.to_string(index=False))
        return self._alphas

    def coverage(
        self,
        replicates: int = 1000,
        variance: Optional[confball.radii.VarianceSpec] = None,
    ) -> pd.DataFrame:
        """Estimates the coverage of the confidence balls for every
        function of the configuration.

        :param replicates: Number of simulated samples per function.,
            defaults to 1000
        :type replicates: int, optional
        :param variance: Variance knowledge of the procedure. The
            simulated noise always has variance ``config.sigma**2``.,
            defaults to ``config.variance``
        :type variance: confball.radii.VarianceSpec, optional
        """
        variance = self._config.variance if variance is None else variance
        family = self._config.family()
        for name, f in self._config.targets().items():
            start = Timer()
            result = confball.sim.coverage_mc(
                f, family, self._config.alpha, variance, replicates,
                self._config.seed, sigma2=self._config.sigma**2,
                threads=self._config.threads,
            )
            self._coverage.loc[len(self._coverage)] = [
                name,
                replicates,
                result["coverage"],
                result["intersection_coverage"],
                result["ci_low"],
                Timer() - start,
            ]
            if self._verbose:
                print(".", end="", flush=True)
        if self._verbose:
            print("\nDone")
        return self._coverage

    def produce_output(
        self,
        filename: str,
        txt: bool = True,
        csv: bool = False,
    ) -> None:
        """Writes all collected results to the file(s).

        :param filename: Name of the file (without extension). If it
            exists already as a .txt or .csv file, a timestamp is
            appended to the name.
        :type filename: str
        :param txt: If True, a .txt file with all tables is produced.,
            defaults to True
        :type txt: bool, optional
        :param csv: If True, one .csv file per table is produced.,
            defaults to False
        :type csv: bool, optional
        """
        if self._table is None and self._coverage.empty:
            raise RuntimeError("Missing call of self.table or "
                               "self.coverage")
        filename = filename.split(".")[0]
        if (os.path.isfile(filename + ".txt")
                or os.path.isfile(filename + "-table.csv")):
            filename += "-" + time.strftime("%Y-%m-%d-%H%M%S")

        tables = {"table": self._table, "alphas": self._alphas,
                  "coverage": self._coverage}
        tables = {key: value for key, value in tables.items()
                  if value is not None and not value.empty}
        if txt:
            with open(filename + ".txt", "w") as file:
                file.write(str(self._config) + "\n")
                for key, table in tables.items():
                    file.write(f"\n{key}\n")
                    file.write(table.to_string(index=False) + "\n")
        if csv:
            for key, table in tables.items():
                table.to_csv(f"{filename}-{key}.csv", index=False)


if __name__ == "__main__":
    experiment = ConfballExperiment()
    experiment.table()
    experiment.alpha_sensitivity()
    experiment.coverage()
    experiment.coverage(variance=confball.radii.Interval(1.2, 0.25))
    experiment.produce_output("confball_study", txt=True, csv=True)
