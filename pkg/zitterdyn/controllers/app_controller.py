import json
import logging
from pathlib import Path

import numpy as np

from ..models.params import make_params
from ..models.state import TrajectoryHistory
from ..physics.energy import energy_table
from ..solvers import dynamics
from ..solvers.spectrum import DEFAULT_BETAS, RootSet, SearchBox, eigenfrequencies, find_roots
from ..utils.errors import ConfigError
from ..utils.parallel import map_ordered
from ..views import export
from ..views.domain_coloring import render_domain_coloring, save_ppm
from .verification import format_table, run_verification

# Box the mode seed family searches for its root
MODE_SEARCH_BOX = SearchBox(0.0, 12.0, 0.5, 40.0)


class RunController:
    """
    Controller that turns a RunConfig into computations and output files.
    """
    def __init__(self, config):
        """Initialize the controller."""
        self.config = config
        self.params = make_params(d=config.model.d, unit_mode=config.model.unit_mode)
        self.workers = config.output.threads
        self.logger = logging.getLogger("Zitterdyn")
        self.written = []

    def _output(self, default_name):
        return Path(self.config.output.out or default_name)

    def _finish(self, command, path):
        self.written.append(path)
        self.written.append(export.write_manifest(path, command, self.config.to_dict()))

    def build_seed(self):
        """Seed history for the simulate command."""
        cfg = self.config.simulate
        params = self.params
        if cfg.seed_file:
            self.logger.info(f"Loading seed history from {cfg.seed_file}")
            return TrajectoryHistory.from_csv(cfg.seed_file, c=params.c)

        tau = dynamics.delay_interval(cfg.beta, params)
        t0 = -cfg.seed_delays * tau
        step = cfg.grid_step * tau if cfg.grid_step else None
        if cfg.seed_family == "uniform":
            return dynamics.uniform_history(cfg.beta, t0, 0.0, params, grid_step=step)
        if cfg.seed_family == "pulse":
            return dynamics.pulse_history(cfg.beta, cfg.amplitude * params.d, cfg.width * tau,
                                          t0, 0.0, params, grid_step=step)
        if cfg.seed_family == "mode":
            roots = find_roots(cfg.beta, MODE_SEARCH_BOX)
            ladder = sorted((root.mu for root in roots.roots if root.mu.imag > 0), key=lambda mu: mu.imag)
            if not 1 <= cfg.mode_index <= len(ladder):
                raise ConfigError(f"mode_index {cfg.mode_index} outside 1..{len(ladder)}",
                                  mode_index=cfg.mode_index, available=len(ladder))
            mu = ladder[cfg.mode_index - 1]
            phase = np.random.default_rng(self.config.seed).uniform(0.0, 2.0 * np.pi)
            amplitude = cfg.amplitude * params.d * np.exp(1j * phase)
            self.logger.info(f"Mode seed mu={mu:.6g}, phase {phase:.6f}")
            return dynamics.mode_history(cfg.beta, mu, amplitude, t0, 0.0, params, grid_step=step)
        raise ConfigError(f"Unknown seed family {cfg.seed_family!r}", seed_family=cfg.seed_family)

    def simulate(self):
        """Propagate the configured seed and export the trajectory CSV."""
        cfg = self.config.simulate
        seed = self.build_seed()
        tau = dynamics.delay_interval(float(seed.v[-1]) / self.params.c, self.params)
        t_end = seed.t_max + cfg.delays * tau
        step = cfg.grid_step * tau if cfg.grid_step else None
        self.logger.info(f"Simulating {cfg.seed_family} seed at beta={cfg.beta} to t={t_end:.6g}")

        report = dynamics.propagate(seed, t_end, grid_step=step, params=self.params)
        path = self._output("trajectory.csv")
        export.export_csv(export.trajectory_records(report.trajectory, self.params),
                          export.TRAJECTORY_SCHEMA, path)
        self._finish("simulate", path)
        return report

    def _root_set(self, beta):
        cfg = self.config.spectrum
        return find_roots(beta, cfg.box, grid_density=cfg.grid_density, params=self.params)

    def spectrum(self):
        """Certified root sets for every configured beta, written as JSON."""
        betas = self.config.spectrum.betas
        root_sets = map_ordered(self._root_set, betas, self.workers)
        for root_set in root_sets:
            ladder = eigenfrequencies(root_set, root_set.beta, self.params)
            self.logger.info(f"beta={root_set.beta}: {len(ladder.omega)} eigenfrequencies, "
                             f"spacing {ladder.asymptotic_spacing}")

        path = self._output("roots.json")
        if len(root_sets) == 1:
            export.export_root_set(root_sets[0], path)
        else:
            export.write_json({"root_sets": [rs.to_dict() for rs in root_sets]}, path)
        self._finish("spectrum", path)
        return root_sets

    def energy(self):
        """Energy decomposition table over the configured grid."""
        cfg = self.config.energy
        rows = energy_table(cfg.betas, cfg.bdots, cfg.n_terms, self.params)
        path = self._output("energy.csv")
        export.export_csv(rows, export.ENERGY_SCHEMA, path)
        self._finish("energy", path)
        return rows

    def load_roots(self, path):
        """Root positions from a spectrum or sweep JSON file."""
        try:
            with open(path) as handle:
                data = json.load(handle)
        except (OSError, ValueError) as e:
            raise ConfigError(f"Cannot read root file {path}: {e}", path=str(path)) from e
        sets = data["root_sets"] if "root_sets" in data else [data]
        return [root.mu for item in sets for root in RootSet.from_dict(item).roots]

    def render(self):
        """Domain-coloring image, with root markers when a root file is configured."""
        cfg = self.config.render
        roots = self.load_roots(cfg.roots) if cfg.roots else None
        image = render_domain_coloring(cfg.beta, cfg.box, cfg.resolution, roots=roots, workers=self.workers)
        path = self._output("domain.ppm")
        save_ppm(image, path)
        self._finish("render", path)
        return image

    def sweep(self):
        """
        Root sets over the sweep velocities plus the composite image.

        Writes <out>.json (root sets), <out>.csv (one summary row per beta)
        and <out>.ppm (beta = 0 background with every root marked).
        """
        betas = self.config.spectrum.betas
        if len(betas) < 2:
            betas = DEFAULT_BETAS
        root_sets = map_ordered(self._root_set, betas, self.workers)

        base = self._output("sweep.json")
        stem = base.with_suffix("")
        json_path = stem.with_suffix(".json")
        export.write_json({"root_sets": [rs.to_dict() for rs in root_sets]}, json_path)

        rows = []
        for root_set in root_sets:
            ladder = eigenfrequencies(root_set, root_set.beta, self.params)
            rows.append({
                "beta": root_set.beta,
                "certified_count": root_set.certified_count,
                "max_re": root_set.max_real_part() if root_set.nonzero() else 0.0,
                "eta_1": ladder.eta[0] if ladder.eta else None,
                "omega_1": ladder.omega[0] if ladder.omega else None,
            })
        csv_path = stem.with_suffix(".csv")
        export.export_csv(rows, export.SWEEP_SCHEMA, csv_path)

        cfg = self.config.render
        markers = [root.mu for root_set in root_sets for root in root_set.roots]
        image = render_domain_coloring(0.0, cfg.box, cfg.resolution, roots=markers, workers=self.workers)
        ppm_path = stem.with_suffix(".ppm")
        save_ppm(image, ppm_path)

        self.written.extend([csv_path, ppm_path])
        self._finish("sweep", json_path)
        return root_sets

    def verify(self):
        """Run the invariant suite; returns (all_passed, table)."""
        results = run_verification(workers=self.workers)
        return all(result.passed for result in results), format_table(results)

    def shutdown(self):
        """Report what the run produced."""
        for path in self.written:
            self.logger.debug(f"Output: {path}")
        self.logger.info(f"Shutting down ({len(self.written)} files written)")
