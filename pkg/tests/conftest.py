"""Shared fixtures.

The expensive session fixtures run the pipeline once and are shared by the
acceptance suite and the trained-model tests. Set SEQSKILL_TEST_CACHE to a
directory to reuse pipeline artifacts across pytest invocations while
developing.
"""

import os

import pytest
import torch

torch.set_num_threads(1)

from seqskill.cli.config import load_config
from seqskill.cli.stages import run_pipeline
from seqskill.synthworld import (
    DemoGenConfig,
    RobotGenConfig,
    gen_demo_corpus,
    gen_robot_corpus,
)

MINI_CONFIG_TEXT = """
synthworld.demo_count = 30
synthworld.robot_count = 30
synthworld.probe_count = 12
backbone.epochs = 3
homomorphism.epochs = 10
dynamics.seeds = 2
evalkit.n_skills = 4
"""


def _run_into(base_dir, name, config_text, seed):
    out = os.path.join(base_dir, name)
    cfg_path = os.path.join(base_dir, f"{name}.cfg")
    with open(cfg_path, "w") as fh:
        fh.write(config_text)
    cfg = load_config(path=cfg_path, seed=seed, out=out)
    run_pipeline(cfg)
    return out, cfg


@pytest.fixture(scope="session")
def work_dir(tmp_path_factory):
    cache = os.environ.get("SEQSKILL_TEST_CACHE")
    if cache:
        os.makedirs(cache, exist_ok=True)
        return cache
    return str(tmp_path_factory.mktemp("seqskill"))


@pytest.fixture(scope="session")
def mini_run(work_dir):
    """Tiny but complete pipeline run (all stages, reduced sizes)."""
    out, cfg = _run_into(work_dir, "mini_s0", MINI_CONFIG_TEXT, seed=0)
    return {"out": out, "cfg": cfg}


@pytest.fixture(scope="session")
def desk_run(work_dir):
    """The desk fixture: 200 demo + 200 robot trajectories, seed 0."""
    out, cfg = _run_into(work_dir, "desk_s0", "", seed=0)
    return {"out": out, "cfg": cfg}


@pytest.fixture(scope="session")
def small_demo_corpus():
    return gen_demo_corpus(DemoGenConfig(count=12), seed=5)


@pytest.fixture(scope="session")
def small_robot_corpus():
    return gen_robot_corpus(RobotGenConfig(count=12), seed=5)
