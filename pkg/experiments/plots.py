"""Plots of simulated samples and Monte Carlo results of confball.

Needs ``matplotlib`` in addition to the dependencies of the package.
"""

from typing import Optional, Sequence

import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from context import confball


def plot_samples(
    functions: Sequence[str] = confball.sim.FUNCTIONS,
    n: int = 1000,
    sigma: float = 1.0,
    seed: Optional[int] = None,
) -> tuple:
    """Plots one noisy sample ``y_i = F(x_i) + sigma eps_i`` together
    with the function for each given test function, one axis per
    function.

    :returns: Tuple (figure, axes) as returned by
        ``matplotlib.pyplot.subplots()``.
    :rtype: tuple
    """
    fig, axs = plt.subplots(1, len(functions),
                            figsize=(6*len(functions), 4), squeeze=False)
    for ax, name in zip(axs[0], functions):
        data = confball.sim.figure_data(name, n, sigma, seed)
        ax.scatter(data["x"], data["y"], s=2, color="grey", label="y")
        ax.plot(data["x"], data["F"], color="black", label=name)
        ax.set_xlabel("x")
        ax.legend(loc="upper right")
    return fig, axs


def plot_radii(
    report: confball.sim.Table1Report,
    on_axis: Optional[plt.Axes] = None,
) -> plt.Axes:
    """Bar plot of the normalized squared radii next to the selection
    counts of every function of a study report.
    """
    if on_axis is None:
        _, on_axis = plt.subplots(figsize=(10, 5))
    table: pd.DataFrame = report.table
    positions = np.arange(len(table))
    on_axis.bar(positions, table["rho_sq_over_n"], color="lightgrey",
                label="rho^2 / n")
    counts = on_axis.twinx()
    for name in table.columns[3:]:
        counts.plot(positions, table[name], marker="x", label=name)
    on_axis.set_xticks(positions)
    on_axis.set_xticklabels(table["m"])
    on_axis.set_xlabel("model")
    counts.set_ylabel("count")
    counts.legend(loc="upper left")
    return on_axis


if __name__ == "__main__":
    fig, _ = plot_samples(seed=0)
    fig.savefig("samples.png", dpi=150)
    report = confball.sim.run_table1()
    ax = plot_radii(report)
    ax.figure.savefig("radii.png", dpi=150)
