import json
import logging
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from integrate.errors import IntegrationError

logger = logging.getLogger(__name__)

PHYSICAL_TIME = "physical-time"
REPARAMETERIZED = "reparameterized"


@dataclass
class Trajectory:
    """
    Sampled solution: ``times`` (t or tau, see metadata["parameterization"]),
    one row of ``states`` per sample, one entry of ``columns`` per state or readout.
    """
    times: np.ndarray
    states: np.ndarray
    columns: list
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float).reshape(len(self.times), len(self.columns))
        if len(self.times) > 1 and np.any(np.diff(self.times) <= 0):
            raise IntegrationError("Trajectory times must be strictly increasing")
        if not np.all(np.isfinite(self.states)):
            raise IntegrationError("Trajectory contains non-finite values")

    def __len__(self):
        return len(self.times)

    @property
    def time_label(self):
        return self.metadata.get("time_label", "t")

    @property
    def final_state(self):
        return self.states[-1]

    def column(self, name):
        try:
            return self.states[:, self.columns.index(name)]
        except ValueError:
            raise KeyError(f"Trajectory has no column '{name}'") from None

    def with_column(self, name, values):
        values = np.asarray(values, dtype=float).reshape(len(self.times), 1)
        return Trajectory(self.times.copy(), np.hstack([self.states, values]), list(self.columns) + [name],
                          dict(self.metadata))

    def to_frame(self):
        frame = pd.DataFrame(self.states, columns=self.columns)
        label = self.time_label if self.time_label not in self.columns else f"{self.time_label}_sample"
        frame.insert(0, label, self.times)
        return frame

    def to_csv(self, path, float_format="%.17g"):
        self.to_frame().to_csv(path, index=False, float_format=float_format)
        logger.info(f"Wrote {len(self)} samples to {path}")

    def to_json(self, path=None):
        payload = {
            "metadata": self.metadata,
            "columns": [self.time_label] + list(self.columns),
            "rows": [[float(t)] + [float(v) for v in row] for t, row in zip(self.times, self.states)],
        }
        if path is None:
            return json.dumps(payload, indent=2, default=str)
        with open(path, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2, default=str)
        logger.info(f"Wrote {len(self)} samples to {path}")
        return path


def reconstruct_time(trajectory, degree):
    """
    Append the physical time t(tau) with t(tau_0) = 0 from dt/dtau = exp((1 - degree) * rho).
    A co-integrated "t" readout is used when present, else the rho readout is
    integrated by the trapezoid rule on the sample grid.
    """
    if trajectory.metadata.get("parameterization") == PHYSICAL_TIME:
        raise IntegrationError("Trajectory is already sampled in physical time")
    b = 1 - float(degree)
    if b == 0:
        t = trajectory.times - trajectory.times[0]
    elif "t" in trajectory.columns:
        clock = trajectory.column("t")
        t = clock - clock[0]
    elif "rho" in trajectory.columns:
        rate = np.exp(b * trajectory.column("rho"))
        steps = 0.5 * (rate[1:] + rate[:-1]) * np.diff(trajectory.times)
        t = np.concatenate([[0.0], np.cumsum(steps)])
    else:
        raise IntegrationError("Time reconstruction needs a rho readout")
    column = "t" if "t" not in trajectory.columns else "t_physical"
    out = trajectory.with_column(column, t)
    out.metadata["physical_time_column"] = column
    return out
