"""
Stage orchestration shared by the command-line subcommands.

Each stage is computed at most once per run and reused by later stages; the
``run_*`` functions write the artifacts of one subcommand into the output directory.
"""

import logging
from pathlib import Path

from .analyzers.bumping import maximal_collections
from .analyzers.charsub import assemble
from .analyzers.components import assign_stabilizers, detect_components
from .analyzers.limitset import compute_limit, render
from .analyzers.nielsen import nielsen_core
from .analyzers.uniform import estimate_constants, rasterize_quasidisc, skinny_translate_diagnostic
from .exporters import reports
from .utils.errors import ConfigError, NoFuchsianModel

logger = logging.getLogger(__name__)

LIMIT_CSV = 'limit_sample.csv'
COMPONENTS_JSON = 'components.json'
COMPONENTS_CSV = 'components.csv'
BUMPS_JSON = 'bumps.json'
NIELSEN_JSON = 'nielsen.json'
UNIFORM_JSON = 'uniform.json'
UNIFORM_CSV = 'uniform_pairs.csv'
DECOMPOSITION_JSON = 'decomposition.json'


class Pipeline:
    """Lazily computed stages for one configuration."""

    def __init__(self, cfg, out_dir):
        self.cfg = cfg
        self.out = Path(out_dir)
        self.out.mkdir(parents=True, exist_ok=True)
        self._sample = None
        self._scan = None
        self._components = None
        self._bumps = None
        self._cores = None

    @property
    def meta(self):
        return {
            'assumptions': self.cfg.assumptions,
            'depths': self.cfg.depths,
            'tolerances': self.cfg.tolerances.to_dict(),
        }

    @property
    def sample(self):
        if self._sample is None:
            cfg = self.cfg
            self._sample = compute_limit(cfg.spec, cfg.depth, cfg.prune_eps, cfg.tolerances,
                                         cfg.threads, cfg.cusp_fill)
        return self._sample

    @property
    def components(self):
        if self._components is None:
            cfg = self.cfg
            self._scan = detect_components(self.sample, cfg.resolutions['components'])
            self._components = assign_stabilizers(self._scan, self.sample, cfg.spec, cfg.stabilizer_depth,
                                                  cfg.tolerances, cfg.threads, strict=False)
        return self._components

    @property
    def untracked(self):
        if self._scan is None:
            self.components
        return [r.id for r in self._scan.untracked + self._scan.demoted]

    @property
    def bumps(self):
        if self._bumps is None:
            cfg = self.cfg
            if len(self.components) < 2:
                raise ConfigError(f"Bumping needs at least two tracked components, "
                                  f"found {len(self.components)}")
            self._bumps = maximal_collections(self.components, cfg.spec, cfg.bump_depth,
                                              cfg.tolerances, cfg.threads, cfg.prune_eps,
                                              limit_depth=cfg.depth, cusp_fill=cfg.cusp_fill)
        return self._bumps

    @property
    def cores(self):
        """
        ``(bump component ids, component id) -> NielsenCoreResult``.

        Components whose stabilizer has no Fuchsian model image are left out.
        """
        if self._cores is None:
            cfg = self.cfg
            by_id = {c.id: c for c in self.components}
            self._cores = {}
            for bump in self.bumps:
                key = tuple(bump.component_ids)
                for cid in bump.component_ids:
                    try:
                        self._cores[(key, cid)] = nielsen_core(bump, by_id[cid], cfg.spec, cfg.bump_depth,
                                                               cfg.tolerances, cfg.threads)
                    except NoFuchsianModel as e:
                        # translates of the modelled component carry no model of their own
                        logger.warning(f"No Nielsen core for component {cid} of bump {list(key)}: {str(e)}")
        return self._cores


def run_render(p):
    cfg = p.cfg
    paths = render(p.sample, cfg.viewport, cfg.resolutions['render'], p.out / cfg.outputs['image'],
                   png=bool(cfg.outputs['png']))
    reports.write_limit_csv(p.sample, p.out / LIMIT_CSV)
    print(f"points={len(p.sample)} depth={p.sample.depth} image={paths[0].name}")
    return paths


def run_components(p):
    records = p.components
    cfg = p.cfg
    reports.emit_components(records, p.out / COMPONENTS_JSON, cfg.config_hash, cfg.spec,
                            p.untracked, p._scan.stable, **p.meta)
    reports.write_components_csv(records, p.out / COMPONENTS_CSV, cfg.spec)
    return records


def run_bump(p):
    bumps = p.bumps
    reports.emit_bumps(bumps, p.out / BUMPS_JSON, p.cfg.config_hash, p.cfg.spec, **p.meta)
    return bumps


def run_nielsen(p):
    entries = [(key, core) for (key, _), core in sorted(p.cores.items(), key=lambda kv: kv[0])]
    reports.emit_nielsen(entries, p.out / NIELSEN_JSON, p.cfg.config_hash, **p.meta)
    return entries


def run_uniform(p):
    cfg = p.cfg
    settings = cfg.uniform
    records = p.components
    index = settings['component']
    if index >= len(records):
        raise ConfigError(f"uniform.component {index} is out of range ({len(records)} tracked components)")
    q = records[index].quasicircle
    resolution = cfg.resolutions['uniform']
    d = rasterize_quasidisc(q, settings['side'], resolution)
    estimate = estimate_constants(d, settings['n_pairs'], cfg.seed)
    series = None
    if settings.get('translate'):
        g = cfg.spec.parse(settings['translate']).map
        series = skinny_translate_diagnostic(q, g, settings['translates'], resolution,
                                             n_pairs=min(settings['n_pairs'], 60), seed=cfg.seed,
                                             side=settings['side'])
    reports.emit_uniform(estimate, p.out / UNIFORM_JSON, cfg.config_hash, series, **p.meta)
    reports.write_uniform_pairs_csv(estimate, p.out / UNIFORM_CSV)
    return estimate, series


def run_charsub(p):
    cfg = p.cfg
    decomposition = assemble(p.bumps, p.cores, cfg.spec, cfg.bump_depth, cfg.tolerances,
                             p.components, cfg.threads)
    decomposition.untracked_regions = p.untracked
    reports.emit_decomposition(decomposition, p.out / DECOMPOSITION_JSON, cfg.config_hash, **p.meta)
    return decomposition


def run_all(p):
    run_render(p)
    run_components(p)
    run_bump(p)
    run_nielsen(p)
    run_charsub(p)
    run_uniform(p)


STAGES = {
    'render': run_render,
    'components': run_components,
    'bump': run_bump,
    'nielsen': run_nielsen,
    'uniform': run_uniform,
    'charsub': run_charsub,
    'all': run_all,
}


def run(subcommand, cfg, out_dir):
    """Run one subcommand for a loaded configuration."""
    if subcommand not in STAGES:
        raise ConfigError(f"Unknown subcommand '{subcommand}'")
    logger.info(f"Running '{subcommand}' for '{cfg.name}' into {out_dir}")
    return STAGES[subcommand](Pipeline(cfg, out_dir))
