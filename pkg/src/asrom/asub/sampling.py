"""Parameter sampling and the sample container."""

from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError


@dataclass
class SampleSet:
    """Parameter draws with their scalar responses."""

    parameters: np.ndarray  # (n, m)
    values: np.ndarray      # (n,)
    seed: int | None = None

    @property
    def n_samples(self):
        return self.parameters.shape[0]

    @property
    def n_params(self):
        return self.parameters.shape[1]

    def check(self, box_low, box_high):
        if np.any(self.parameters < box_low) or np.any(self.parameters > box_high):
            raise ConfigError("samples outside the admissible box")
        if self.n_samples < self.n_params + 2:
            raise ConfigError("too few samples for local linear gradient fits")


def sample_parameters(n, box_low, box_high, seed):
    """n i.i.d. uniform draws from the box, reproducible from the seed."""
    if n < 1:
        raise ConfigError("need at least one sample")
    box_low = np.atleast_1d(np.asarray(box_low, dtype=float))
    box_high = np.atleast_1d(np.asarray(box_high, dtype=float))
    rng = np.random.default_rng(seed)
    return rng.uniform(box_low, box_high, size=(n, box_low.size))
