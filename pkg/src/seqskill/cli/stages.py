"""Pipeline stages. Stages communicate only through files under the run
directory and each writes a manifest; a stage whose manifest already matches
the (config hash, seed) pair is considered complete and is skipped on resume.
"""

import csv
import json
import os
import time

import numpy as np
import torch

from ..backbone import (
    Backbone,
    BackboneConfig,
    PretrainConfig,
    encode_video_batch,
    load_backbone,
    pretrain,
    save_backbone,
)
from ..dynamics import DynModelSpec, V2SDynamics
from ..errors import ConfigError, CorpusFormatError, MissingArtifactError
from ..evalkit import (
    analogy_retrieval,
    binomial_stderr,
    dynamics_report,
    embed_2d,
    generate_skill,
    sample_demo_event_latents,
    sample_random_latents,
    shuffled_control,
    skill_quality,
    write_embedding_csv,
    write_embedding_png,
)
from ..homomorphism import (
    AdapterConfig,
    DistillConfig,
    distill,
    embed_robot_skills_batch,
    load_adapters,
    save_adapters,
)
from ..seeding import derive_seed
from ..synthworld import (
    DA,
    DS,
    DemoGenConfig,
    RobotGenConfig,
    SHARED_MOTIFS,
    default_state,
    gen_demo_corpus,
    gen_robot_corpus,
    read_corpus,
    read_header,
    read_sidecar,
    sidecar_path,
    write_corpus,
)
from .config import RunConfig, config_hash, config_text
from .manifest import RunManifest, read_manifest

STAGE_ORDER = (
    "gen-data",
    "pretrain",
    "distill",
    "eval-dynamics",
    "analogies",
    "gen-skills",
    "report",
)


class RunPaths:
    def __init__(self, out_dir: str):
        self.out = out_dir
        self.data = os.path.join(out_dir, "data")
        self.checkpoints = os.path.join(out_dir, "checkpoints")
        self.curves = os.path.join(out_dir, "curves")
        self.eval = os.path.join(out_dir, "eval")
        self.skills = os.path.join(out_dir, "skills")
        self.manifests = os.path.join(out_dir, "manifests")

    def ensure(self):
        for d in (self.out, self.data, self.checkpoints, self.curves,
                  self.eval, self.skills, self.manifests):
            os.makedirs(d, exist_ok=True)
        return self

    def corpus(self, name: str) -> str:
        return os.path.join(self.data, f"{name}.ssc")

    def backbone_ckpt(self, rep: int) -> str:
        return os.path.join(self.checkpoints, f"backbone_s{rep}.ckpt")

    def adapters_ckpt(self, rep: int, epochs) -> str:
        return os.path.join(self.checkpoints, f"adapters_s{rep}_ep{epochs}.ckpt")

    def manifest(self, stage: str) -> str:
        return os.path.join(self.manifests, f"{stage}.json")

    def config_file(self) -> str:
        return os.path.join(self.out, "config.txt")


def rep_seeds(cfg: RunConfig) -> list[int]:
    return [cfg.seed + i for i in range(cfg.dynamics.seeds)]


def backbone_config(cfg: RunConfig) -> BackboneConfig:
    sw, bb = cfg.synthworld, cfg.backbone
    return BackboneConfig(
        frame_dim=sw.frame_dim,
        vocab=sw.vocab,
        token_dim=bb.token_dim,
        event_count=bb.event_count,
        event_dim=bb.event_dim,
        width=bb.width,
        depth=bb.depth,
        head_count=bb.heads,
        frame_decode_len=sw.frames,
        token_decode_len=sw.token_max,
        var_floor=bb.var_floor,
        max_len=max(512, sw.frames + 8, sw.horizon + 8),
    )


def adapter_config(cfg: RunConfig) -> AdapterConfig:
    sw, hm = cfg.synthworld, cfg.homomorphism
    return AdapterConfig(
        state_dim=DS,
        action_dim=DA,
        frame_dim=sw.frame_dim,
        token_dim=cfg.backbone.token_dim,
        vocab=sw.vocab,
        frame_len=sw.frames,
        token_len=sw.token_max,
        state_len=sw.horizon,
        action_len=sw.horizon - 1,
        width=hm.width,
        depth=hm.depth,
        head_count=hm.heads,
        max_len=max(512, sw.frames + 8, sw.horizon + 8),
    )


def _write_config_file(cfg: RunConfig, paths: RunPaths) -> list[str]:
    """Record (or verify) the effective config for this run directory."""
    text = config_text(cfg)
    target = paths.config_file()
    if os.path.exists(target):
        with open(target, "r", encoding="utf-8") as fh:
            if fh.read() != text:
                raise ConfigError(
                    f"run directory {paths.out} was created with a different "
                    "config/seed; use a fresh --out"
                )
        return []
    with open(target, "w", encoding="utf-8") as fh:
        fh.write(text)
    return [target]


def _require(path: str, needed_by: str, produced_by: str) -> str:
    if not os.path.exists(path):
        raise MissingArtifactError(
            f"stage '{needed_by}' needs {path}, produced by stage "
            f"'{produced_by}'; run it first",
            stage=produced_by,
        )
    return path


def _start(cfg: RunConfig, stage: str) -> RunManifest:
    return RunManifest(
        command=stage,
        config_hash=config_hash(cfg),
        seed=cfg.seed,
        started=time.time(),
    )


def _write_curve_csv(path: str, curve: list[dict]) -> None:
    if not curve:
        with open(path, "w", newline="") as fh:
            fh.write("")
        return
    cols = list(curve[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols)
        writer.writeheader()
        writer.writerows(curve)


def stage_gen_data(cfg: RunConfig) -> RunManifest:
    paths = RunPaths(cfg.out).ensure()
    man = _start(cfg, "gen-data")
    man.outputs += _write_config_file(cfg, paths)
    sw = cfg.synthworld
    chash = config_hash(cfg)

    demo_cfg = DemoGenConfig(
        count=sw.demo_count,
        frames=sw.frames,
        frame_dim=sw.frame_dim,
        vocab=sw.vocab,
        token_max=sw.token_max,
        motifs_min=sw.demo_motifs_min,
        motifs_max=sw.demo_motifs_max,
        event_budget=cfg.backbone.event_count,
        jitter=sw.jitter,
    )
    robot_cfg = RobotGenConfig(
        count=sw.robot_count,
        horizon=sw.horizon,
        motifs_min=sw.robot_motifs_min,
        motifs_max=sw.robot_motifs_max,
        ctrl_noise=sw.ctrl_noise,
    )
    probe_demo_cfg = DemoGenConfig(
        count=sw.probe_count,
        frames=sw.frames,
        frame_dim=sw.frame_dim,
        vocab=sw.vocab,
        token_max=sw.token_max,
        motifs_min=1,
        motifs_max=1,
        event_budget=cfg.backbone.event_count,
        motif_subset=list(SHARED_MOTIFS),
        jitter=sw.jitter,
    )
    probe_robot_cfg = RobotGenConfig(
        count=sw.probe_count,
        horizon=sw.horizon,
        motifs_min=1,
        motifs_max=1,
        ctrl_noise=sw.ctrl_noise,
    )

    demo = gen_demo_corpus(demo_cfg, derive_seed(cfg.seed, "demo-corpus"))
    robot = gen_robot_corpus(robot_cfg, derive_seed(cfg.seed, "robot-corpus"))
    n_eval = max(1, int(round(sw.eval_fraction * len(robot))))
    robot_train, robot_eval = robot[:-n_eval], robot[-n_eval:]
    demo_probe = gen_demo_corpus(probe_demo_cfg, derive_seed(cfg.seed, "demo-probe"))
    robot_probe = gen_robot_corpus(probe_robot_cfg, derive_seed(cfg.seed, "robot-probe"))

    for name, corpus, kind in (
        ("demo_train", demo, "demo"),
        ("robot_train", robot_train, "robot"),
        ("robot_eval", robot_eval, "robot"),
        ("demo_probe", demo_probe, "demo"),
        ("robot_probe", robot_probe, "robot"),
    ):
        target = paths.corpus(name)
        write_corpus(corpus, target, seed=cfg.seed, config_hash=chash, kind=kind)
        man.outputs.append(target)
        if os.path.exists(sidecar_path(target)):
            man.outputs.append(sidecar_path(target))
    man.write(paths.manifest("gen-data"))
    return man


def stage_pretrain(cfg: RunConfig) -> RunManifest:
    paths = RunPaths(cfg.out).ensure()
    man = _start(cfg, "pretrain")
    man.outputs += _write_config_file(cfg, paths)
    demo_path = _require(paths.corpus("demo_train"), "pretrain", "gen-data")
    man.inputs.append(demo_path)
    demo = read_corpus(demo_path)  # labels live in the sidecar, never loaded here

    bb_cfg = backbone_config(cfg)
    train_cfg = PretrainConfig(
        epochs=cfg.backbone.epochs,
        batch_size=cfg.backbone.batch_size,
        lr=cfg.backbone.lr,
        alpha=cfg.backbone.alpha,
        beta=cfg.backbone.beta,
        gamma=cfg.backbone.gamma,
    )
    for rep, seed in enumerate(rep_seeds(cfg)):
        bb, curve = pretrain(demo, bb_cfg, train_cfg, seed=seed)
        ckpt = paths.backbone_ckpt(rep)
        save_backbone(bb, ckpt, seed=seed)
        curve_path = os.path.join(paths.curves, f"pretrain_s{rep}.csv")
        _write_curve_csv(curve_path, curve)
        man.outputs += [ckpt, curve_path]
    man.write(paths.manifest("pretrain"))
    return man


def stage_distill(cfg: RunConfig) -> RunManifest:
    paths = RunPaths(cfg.out).ensure()
    man = _start(cfg, "distill")
    man.outputs += _write_config_file(cfg, paths)
    robot_path = _require(paths.corpus("robot_train"), "distill", "gen-data")
    man.inputs.append(robot_path)
    robot = read_corpus(robot_path)

    ad_cfg = adapter_config(cfg)
    train_cfg = DistillConfig(
        epochs=cfg.homomorphism.epochs,
        batch_size=cfg.homomorphism.batch_size,
        lr=cfg.homomorphism.lr,
        gamma=cfg.homomorphism.gamma,
        align_weight=cfg.homomorphism.align_weight,
    )
    snapshot_epochs = tuple(sorted(set(int(e) for e in cfg.dynamics.epochs_list)))
    for rep, seed in enumerate(rep_seeds(cfg)):
        bb_path = _require(paths.backbone_ckpt(rep), "distill", "pretrain")
        man.inputs.append(bb_path)
        bb = load_backbone(bb_path).freeze()

        def save_snapshot(epoch, adapters, rep=rep, seed=seed):
            target = paths.adapters_ckpt(rep, epoch)
            save_adapters(adapters, target, seed=seed)
            man.outputs.append(target)

        adapters, curve = distill(
            robot,
            bb,
            ad_cfg,
            train_cfg,
            seed=seed,
            snapshot_epochs=snapshot_epochs,
            snapshot_cb=save_snapshot,
        )
        final = paths.adapters_ckpt(rep, "final")
        save_adapters(adapters, final, seed=seed)
        curve_path = os.path.join(paths.curves, f"distill_s{rep}.csv")
        _write_curve_csv(curve_path, curve)
        man.outputs += [final, curve_path]
    man.write(paths.manifest("distill"))
    return man


def _v2s_provider(cfg: RunConfig, paths: RunPaths):
    seeds = rep_seeds(cfg)

    def provider(seed: int, epochs: int) -> V2SDynamics:
        rep = seeds.index(seed)
        bb_path = _require(paths.backbone_ckpt(rep), "eval-dynamics", "pretrain")
        ad_path = _require(paths.adapters_ckpt(rep, epochs), "eval-dynamics", "distill")
        return V2SDynamics(load_backbone(bb_path).freeze(), load_adapters(ad_path))

    return provider


def stage_eval_dynamics(cfg: RunConfig) -> RunManifest:
    paths = RunPaths(cfg.out).ensure()
    man = _start(cfg, "eval-dynamics")
    man.outputs += _write_config_file(cfg, paths)
    train_path = _require(paths.corpus("robot_train"), "eval-dynamics", "gen-data")
    eval_path = _require(paths.corpus("robot_eval"), "eval-dynamics", "gen-data")
    man.inputs += [train_path, eval_path]
    robot_train = read_corpus(train_path)
    robot_eval = read_corpus(eval_path)

    rows_path = os.path.join(paths.eval, "dynamics_rows.jsonl")
    rows_fh = open(rows_path, "w", encoding="utf-8")

    def sink(row):
        rows_fh.write(json.dumps(row, sort_keys=True) + "\n")

    def spec(kind: str) -> DynModelSpec:
        d = cfg.dynamics
        return DynModelSpec(
            kind,
            ensemble_size=d.ensemble_size,
            hidden=d.hidden,
            layers=d.layers,
            lr=d.lr,
            batch_size=d.batch_size,
        )

    try:
        report = dynamics_report(
            methods=("PNN", "DNN", "DE", "PE", "V2S"),
            train_trajectories=robot_train,
            eval_trajectories=robot_eval,
            epochs_list=cfg.dynamics.epochs_list,
            horizons=tuple(cfg.dynamics.horizons),
            seeds=rep_seeds(cfg),
            v2s_provider=_v2s_provider(cfg, paths),
            baseline_spec=spec,
            max_windows=cfg.dynamics.max_windows,
            metadata={
                "config_hash": config_hash(cfg),
                "seed": cfg.seed,
                "seed_count": cfg.dynamics.seeds,
            },
            row_sink=sink,
        )
    finally:
        rows_fh.close()
    report_csv = os.path.join(paths.eval, "dynamics_report.csv")
    report_json = os.path.join(paths.eval, "dynamics_report.json")
    report.write_csv(report_csv)
    report.write_json(report_json)
    man.outputs += [rows_path, report_csv, report_json]
    man.write(paths.manifest("eval-dynamics"))
    return man


def _probe_labels(path: str, count: int) -> list[int]:
    labels = read_sidecar(path)
    return [labels[i][0][0] for i in range(count)]


def stage_analogies(cfg: RunConfig) -> RunManifest:
    paths = RunPaths(cfg.out).ensure()
    man = _start(cfg, "analogies")
    man.outputs += _write_config_file(cfg, paths)
    demo_path = _require(paths.corpus("demo_probe"), "analogies", "gen-data")
    robot_path = _require(paths.corpus("robot_probe"), "analogies", "gen-data")
    man.inputs += [demo_path, robot_path]
    demo_probe = read_corpus(demo_path)
    robot_probe = read_corpus(robot_path)
    demo_labels = _probe_labels(demo_path, len(demo_probe))
    robot_labels = _probe_labels(robot_path, len(robot_probe))

    per_seed = []
    all_rows = []
    embed_payload = None
    for rep, seed in enumerate(rep_seeds(cfg)):
        bb = load_backbone(
            _require(paths.backbone_ckpt(rep), "analogies", "pretrain")
        ).freeze()
        adapters = load_adapters(
            _require(paths.adapters_ckpt(rep, "final"), "analogies", "distill")
        )
        with torch.no_grad():
            vs = torch.stack(
                [torch.from_numpy(tr.v).to(torch.float64) for tr in demo_probe]
            )
            demo_z = encode_video_batch(bb, vs).cpu().numpy()
            ss = torch.stack(
                [torch.from_numpy(tr.s).to(torch.float64) for tr in robot_probe]
            )
            robot_z = embed_robot_skills_batch(adapters, bb, ss).cpu().numpy()
        result = analogy_retrieval(
            demo_z, demo_labels, robot_z, robot_labels,
            metric=cfg.evalkit.retrieval_metric,
        )
        control = shuffled_control(
            demo_z, demo_labels, robot_z, robot_labels,
            seed=derive_seed(seed, "label-shuffle"),
            metric=cfg.evalkit.retrieval_metric,
        )
        per_seed.append(
            {
                "seed": seed,
                **result.summary(),
                "control_accuracy": control.accuracy,
                "control_stderr_band": 3 * binomial_stderr(result.chance, result.n_queries),
            }
        )
        for i, cid in enumerate(result.class_ids):
            all_rows.append(
                {
                    "seed": seed,
                    "true_motif": cid,
                    **{
                        f"pred_{pid}": int(result.confusion[i, j])
                        for j, pid in enumerate(result.class_ids)
                    },
                }
            )
        if rep == 0:
            embed_payload = (demo_z, demo_labels, robot_z, robot_labels)

    analogies_csv = os.path.join(paths.eval, "analogies.csv")
    with open(analogies_csv, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(all_rows[0].keys()))
        writer.writeheader()
        writer.writerows(all_rows)
    summary = {
        "per_seed": per_seed,
        "mean_accuracy": float(np.mean([r["accuracy"] for r in per_seed])),
        "chance": per_seed[0]["chance"],
        "eval_seed": derive_seed(cfg.seed, "analogies"),
    }
    analogies_json = os.path.join(paths.eval, "analogies.json")
    with open(analogies_json, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)

    demo_z, demo_labels, robot_z, robot_labels = embed_payload
    latents = np.concatenate([demo_z.mean(axis=1), robot_z.mean(axis=1)])
    sources = ["video"] * len(demo_z) + ["robot"] * len(robot_z)
    labels = list(demo_labels) + list(robot_labels)
    coords, info = embed_2d(latents, sources, method=cfg.evalkit.embed_method)
    embedding_csv = os.path.join(paths.eval, "embedding.csv")
    embedding_png = os.path.join(paths.eval, "embedding.png")
    write_embedding_csv(embedding_csv, coords, sources, labels)
    write_embedding_png(embedding_png, coords, sources, labels)

    man.outputs += [analogies_csv, analogies_json, embedding_csv, embedding_png]
    man.write(paths.manifest("analogies"))
    return man


def stage_gen_skills(cfg: RunConfig) -> RunManifest:
    paths = RunPaths(cfg.out).ensure()
    man = _start(cfg, "gen-skills")
    man.outputs += _write_config_file(cfg, paths)
    demo_path = _require(paths.corpus("demo_train"), "gen-skills", "gen-data")
    robot_path = _require(paths.corpus("robot_train"), "gen-skills", "gen-data")
    man.inputs += [demo_path, robot_path]
    demo = read_corpus(demo_path)
    robot = read_corpus(robot_path)

    quality = {"per_seed": [], "eval_seed": derive_seed(cfg.seed, "gen-skills")}
    for rep, seed in enumerate(rep_seeds(cfg)):
        bb = load_backbone(
            _require(paths.backbone_ckpt(rep), "gen-skills", "pretrain")
        ).freeze()
        adapters = load_adapters(
            _require(paths.adapters_ckpt(rep, "final"), "gen-skills", "distill")
        )
        event_z = sample_demo_event_latents(
            bb, demo, cfg.evalkit.n_skills, seed=derive_seed(seed, "event-latents")
        )
        random_z = sample_random_latents(
            bb, cfg.evalkit.n_skills, seed=derive_seed(seed, "random-latents")
        )
        s0 = default_state()
        skills, baseline = [], []
        seed_dir = os.path.join(paths.skills, f"s{rep}")
        os.makedirs(seed_dir, exist_ok=True)
        for j, z in enumerate(event_z):
            skills.append(generate_skill(bb, adapters, z, s0, origin="event"))
        for j, z in enumerate(random_z):
            baseline.append(generate_skill(bb, adapters, z, s0, origin="random"))
        for j, sk in enumerate(skills + baseline):
            stem = os.path.join(seed_dir, f"skill_{j:02d}_{sk.origin}")
            np.savetxt(f"{stem}_actions.csv", sk.actions, delimiter=",", fmt="%.8g")
            np.savetxt(f"{stem}_states.csv", sk.states, delimiter=",", fmt="%.8g")
            man.outputs += [f"{stem}_actions.csv", f"{stem}_states.csv"]
            if cfg.evalkit.save_plots:
                plot = f"{stem}_path.png"
                _plot_skill(plot, sk)
                man.outputs.append(plot)
        q_event = skill_quality(skills, robot, gamma=cfg.evalkit.skill_gamma)
        q_random = skill_quality(baseline, robot, gamma=cfg.evalkit.skill_gamma)
        quality["per_seed"].append(
            {
                "seed": seed,
                "event": {k: v["median"] for k, v in q_event.items()},
                "random": {k: v["median"] for k, v in q_random.items()},
                "event_detail": q_event,
                "random_detail": q_random,
                "median_ratio_actions": q_event["actions"]["median"]
                / max(q_random["actions"]["median"], 1e-12),
            }
        )
    ratios = [r["median_ratio_actions"] for r in quality["per_seed"]]
    quality["mean_median_ratio_actions"] = float(np.mean(ratios))
    quality_json = os.path.join(paths.eval, "skill_quality.json")
    with open(quality_json, "w") as fh:
        json.dump(quality, fh, indent=2, sort_keys=True)
    man.outputs.append(quality_json)
    man.write(paths.manifest("gen-skills"))
    return man


def _plot_skill(path: str, skill) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(4, 4))
    eff = skill.states[:, 0:2]
    ax.plot(eff[:, 0], eff[:, 1], "-o", markersize=2)
    ax.plot(eff[0, 0], eff[0, 1], "g^", label="start")
    ax.set_xlim(-1, 1)
    ax.set_ylim(-1, 1)
    ax.set_title(skill.origin)
    fig.tight_layout()
    fig.savefig(path, dpi=100)
    plt.close(fig)


def stage_report(cfg: RunConfig) -> RunManifest:
    paths = RunPaths(cfg.out).ensure()
    man = _start(cfg, "report")
    man.outputs += _write_config_file(cfg, paths)
    dyn_json = _require(
        os.path.join(paths.eval, "dynamics_report.json"), "report", "eval-dynamics"
    )
    ana_json = _require(
        os.path.join(paths.eval, "analogies.json"), "report", "analogies"
    )
    sq_json = _require(
        os.path.join(paths.eval, "skill_quality.json"), "report", "gen-skills"
    )
    man.inputs += [dyn_json, ana_json, sq_json]
    with open(dyn_json) as fh:
        dynamics = json.load(fh)
    with open(ana_json) as fh:
        analogies = json.load(fh)
    with open(sq_json) as fh:
        skills = json.load(fh)

    report_csv = os.path.join(paths.out, "report.csv")
    with open(report_csv, "w", newline="") as fh:
        cols = ["method", "epochs", "horizon", "rmse_mean", "rmse_stderr", "seed_count"]
        writer = csv.DictWriter(fh, fieldnames=cols)
        writer.writeheader()
        for row in dynamics["rows"]:
            writer.writerow({c: row[c] for c in cols})

    payload = {
        "dynamics": dynamics["rows"],
        "analogy": analogies,
        "skills": skills,
        "metadata": {
            "config_hash": config_hash(cfg),
            "seed": cfg.seed,
            "revision": man.revision,
            "generated_at": time.time(),
        },
    }
    report_json = os.path.join(paths.out, "report.json")
    with open(report_json, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
    man.outputs += [report_csv, report_json]
    man.write(paths.manifest("report"))
    return man


STAGE_FNS = {
    "gen-data": stage_gen_data,
    "pretrain": stage_pretrain,
    "distill": stage_distill,
    "eval-dynamics": stage_eval_dynamics,
    "analogies": stage_analogies,
    "gen-skills": stage_gen_skills,
    "report": stage_report,
}


def stage_completed(cfg: RunConfig, stage: str) -> bool:
    paths = RunPaths(cfg.out)
    target = paths.manifest(stage)
    if not os.path.exists(target):
        return False
    man = read_manifest(target)
    return man.get("config_hash") == config_hash(cfg) and man.get("seed") == cfg.seed


def run_pipeline(cfg: RunConfig, skip=()) -> list[str]:
    """Run all stages in order; returns the list of stages executed.

    A stage is skipped when named in ``skip`` or when its manifest already
    matches this (config hash, seed).
    """
    for stage in skip:
        if stage not in STAGE_ORDER:
            raise ConfigError(f"unknown stage {stage!r}; expected one of {STAGE_ORDER}")
    executed = []
    for stage in STAGE_ORDER:
        if stage in skip or stage_completed(cfg, stage):
            continue
        STAGE_FNS[stage](cfg)
        executed.append(stage)
    return executed


def inspect_artifact(path: str, with_labels: bool = False) -> str:
    """Human-readable summary of a checkpoint or corpus file."""
    with open(path, "rb") as fh:
        magic = fh.read(4)
    lines = [f"file: {path}"]
    if magic == b"SSK1":
        from ..diffcore import load_checkpoint

        ck = load_checkpoint(path)
        lines.append(f"kind: checkpoint ({ck.config.get('kind', 'unknown')})")
        lines.append(f"seed: {ck.seed}")
        cfg = ck.config.get("config", {})
        lines.append("config: " + json.dumps(cfg, sort_keys=True))
        lines.append(f"tensors: {len(ck.tensors)}")
        for name, arr in ck.tensors.items():
            lines.append(f"  {name}  {tuple(arr.shape)}")
        return "\n".join(lines)
    if magic == b"SSC1":
        header = read_header(path)
        lines.append(f"kind: corpus ({header['kind']})")
        lines.append(f"count: {header['count']}")
        lines.append(f"dims: {json.dumps(header['dims'], sort_keys=True)}")
        lines.append(f"seed: {header['seed']}  config_hash: {header['config_hash']}")
        if with_labels:
            try:
                labels = read_sidecar(path)
            except FileNotFoundError:
                lines.append("labels: no sidecar file")
            else:
                lines.append(f"labels: {len(labels)} trajectories")
                for idx in sorted(labels)[:10]:
                    lines.append(f"  traj {idx}: {labels[idx]}")
                if len(labels) > 10:
                    lines.append(f"  ... {len(labels) - 10} more")
        return "\n".join(lines)
    raise CorpusFormatError(f"unrecognized magic {magic!r}", 0)
