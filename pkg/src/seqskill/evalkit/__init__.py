"""Evaluation suite: dynamics grid, analogy retrieval, skills, 2-D export."""

from .analogy import AnalogyResult, analogy_retrieval, binomial_stderr, shuffled_control
from .dynreport import BASELINE_KINDS, EvalReport, dynamics_report
from .embed import embed_2d, write_embedding_csv, write_embedding_png
from .skills import (
    GeneratedSkill,
    decode_actions_batch,
    generate_skill,
    sample_demo_event_latents,
    sample_random_latents,
    skill_quality,
)

__all__ = [
    "AnalogyResult",
    "BASELINE_KINDS",
    "EvalReport",
    "GeneratedSkill",
    "analogy_retrieval",
    "binomial_stderr",
    "decode_actions_batch",
    "dynamics_report",
    "embed_2d",
    "generate_skill",
    "sample_demo_event_latents",
    "sample_random_latents",
    "shuffled_control",
    "skill_quality",
    "write_embedding_csv",
    "write_embedding_png",
]
