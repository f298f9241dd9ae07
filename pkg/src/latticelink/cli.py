"""Pipeline orchestration: staged, seeded, reproducible runs.

Each stage reads artifacts from the run directory, writes its own, and
records input/output hashes plus the config hash in ``manifest.json``.
Stages refuse to chain onto artifacts produced under a different config.
All randomness derives from the single configured seed through fixed
per-stage offsets, so rerunning a stage (or the whole pipeline) reproduces
its outputs byte for byte.

Exit codes: 0 success, 1 usage error, 2 data error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import copy
import datetime as _dt
import hashlib
import json
import logging
import sys
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__, baselines, metrics
from .context import (
    EdgeListParseError,
    context_from_dict,
    context_stats,
    context_to_dict,
    load_context,
    load_edge_list,
    save_context,
    split_random_edges,
    split_temporal,
    SplitPair,
)
from .fca import (
    ConceptBudgetError,
    concepts_from_jsonl,
    concepts_to_jsonl,
    cover_relation,
    covers_from_jsonl,
    covers_to_jsonl,
    enumerate_concepts,
)
from .finetune import (
    BudgetExceededError,
    LinkSamples,
    PredictionReport,
    clone_model,
    finetune_oa,
    finetune_oo,
    gen_oa_samples,
    gen_oo_samples,
    predict_oa,
    predict_oo,
)
from .model import EncoderConfig, Model, load_checkpoint, save_checkpoint
from .pretrain import build_pretrain_set, eval_ncp_heldout, run_pretrain
from .tokens import Vocab, default_max_len

logger = logging.getLogger(__name__)

DEFAULT_CONFIG: dict = {
    "seed": 7,
    "data": {"edges": "", "format": "csv"},
    "split": {
        "kind": "random-removal",
        "fraction": 0.1,
        "cutoff": None,
        "restrict_target": False,
    },
    "encoder": {"d_model": 64, "n_layers": 2, "n_heads": 4, "d_ff": 256,
                "dropout": 0.1, "max_len_cap": 128},
    "pretrain": {"epochs": 50, "batch_size": 32, "lr": 1e-3, "mask_rate": 0.15,
                 "holdout_fraction": 0.2},
    "finetune": {"task": "oa", "epochs": 30, "batch_size": 32, "lr": 1e-3,
                 "l_m": 2, "balance": True, "test_fraction": 0.2},
    "baseline": {"mf_rank": 16, "mf_reg": 0.1, "mf_epochs": 20},
    "budget": {"max_concepts": 2_000_000, "max_groups": 2_000_000},
}

# fixed seed offsets per stochastic stage
SEED_SPLIT = 0
SEED_PAIRS = 1
SEED_OBJECT_MODEL = 2
SEED_ATTRIBUTE_MODEL = 3
SEED_SAMPLES = 4
SEED_FINETUNE = 5
SEED_ABLATE = 11


class UsageError(ValueError):
    pass


class DataError(ValueError):
    pass


def _deep_update(base: dict, extra: dict) -> dict:
    out = copy.deepcopy(base)
    for k, v in extra.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _deep_update(out[k], v)
        else:
            out[k] = v
    return out


def load_config(path: Optional[str], seed: Optional[int]) -> dict:
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if path:
        try:
            file_cfg = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError as exc:
            raise UsageError(f"config file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise UsageError(f"config file is not valid JSON: {exc}") from exc
        if not isinstance(file_cfg, dict):
            raise UsageError("config file must hold a JSON object")
        cfg = _deep_update(cfg, file_cfg)
    if seed is not None:
        cfg["seed"] = seed
    return cfg


def config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("utf-8")).hexdigest()[:16]


def _sha256_file(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:16]


class Run:
    """One run directory: config, manifest, artifact paths."""

    def __init__(self, out_dir: Path, cfg: dict):
        self.dir = out_dir
        self.cfg = cfg
        self.hash = config_hash(cfg)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.manifest_path = self.dir / "manifest.json"
        if self.manifest_path.exists():
            self.manifest = json.loads(self.manifest_path.read_text(encoding="utf-8"))
            if self.manifest.get("config_hash") != self.hash:
                raise DataError(
                    f"out-dir {self.dir} holds artifacts for config hash "
                    f"{self.manifest.get('config_hash')}, current config hashes to {self.hash}; "
                    "refusing to chain"
                )
        else:
            self.manifest = {"config_hash": self.hash, "version": __version__,
                             "config": cfg, "stages": {}}

    def path(self, name: str) -> Path:
        return self.dir / name

    def require(self, name: str, producer: str) -> Path:
        p = self.path(name)
        if not p.exists():
            raise DataError(f"missing artifact {name}; run the '{producer}' stage first")
        return p

    def record(self, stage: str, inputs: list[Path], outputs: list[Path], seed: int) -> None:
        self.manifest["stages"][stage] = {
            "seed": seed,
            "inputs": {p.name: _sha256_file(p) for p in inputs if p.exists()},
            "outputs": {p.name: _sha256_file(p) for p in outputs},
        }
        self.manifest_path.write_text(
            json.dumps(self.manifest, sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )

    def write_json(self, name: str, payload: dict) -> Path:
        p = self.path(name)
        payload = dict(payload)
        payload["config_hash"] = self.hash
        p.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")
        return p


def _load_split(run: Run) -> SplitPair:
    input_ctx = load_context(run.require("input_context.json", "split"))
    target_ctx = load_context(run.require("target_context.json", "split"))
    meta = json.loads(run.require("split.json", "split").read_text(encoding="utf-8"))
    return SplitPair(
        input_ctx=input_ctx,
        target_ctx=target_ctx,
        split_kind=meta["kind"],
        seed=meta.get("seed"),
        cutoff=_dt.date.fromisoformat(meta["cutoff"]) if meta.get("cutoff") else None,
        attr_map=np.array(meta["attr_map"], dtype=np.int64) if meta.get("attr_map") is not None else None,
    )


def _vocabs(run: Run) -> tuple[Vocab, Vocab]:
    input_ctx = load_context(run.require("input_context.json", "split"))
    obj = Vocab(side="object", n_entities=input_ctx.n_objects, labels=input_ctx.object_labels)
    attr = Vocab(side="attribute", n_entities=input_ctx.n_attributes,
                 labels=input_ctx.attribute_labels)
    return obj, attr


# ------------------------------------------------------------------- stages


def stage_ingest(run: Run, edges_path: Optional[str]) -> None:
    path = edges_path or run.cfg["data"]["edges"]
    if not path:
        raise UsageError("no edge list given; set data.edges in the config or pass --edges")
    src = Path(path)
    if not src.exists():
        raise DataError(f"edge list not found: {src}")
    ctx = load_edge_list(src, format=run.cfg["data"]["format"])
    out_ctx = run.path("context.json")
    save_context(ctx, out_ctx)
    stats = run.write_json("stats.json", context_stats(ctx))
    run.record("ingest", [src], [out_ctx, stats], run.cfg["seed"])
    print(f"ingest: {ctx.n_objects} objects, {ctx.n_attributes} attributes, {ctx.n_edges} edges")


def stage_split(run: Run) -> None:
    ctx = load_context(run.require("context.json", "ingest"))
    scfg = run.cfg["split"]
    seed = run.cfg["seed"] + SEED_SPLIT
    if scfg["kind"] == "temporal":
        if not scfg.get("cutoff"):
            raise UsageError("temporal split needs split.cutoff (ISO date)")
        pair = split_temporal(ctx, _dt.date.fromisoformat(scfg["cutoff"]))
    elif scfg["kind"] == "random-removal":
        pair = split_random_edges(ctx, scfg["fraction"], seed,
                                  restrict_target=scfg.get("restrict_target", False))
    else:
        raise UsageError(f"unknown split.kind {scfg['kind']!r}")
    p_in, p_tgt = run.path("input_context.json"), run.path("target_context.json")
    save_context(pair.input_ctx, p_in)
    save_context(pair.target_ctx, p_tgt)
    meta = run.write_json("split.json", {
        "kind": pair.split_kind,
        "seed": pair.seed,
        "cutoff": pair.cutoff.isoformat() if pair.cutoff else None,
        "attr_map": pair.attr_map.tolist() if pair.attr_map is not None else None,
        "input_edges": pair.input_ctx.n_edges,
        "target_edges": pair.target_ctx.n_edges,
    })
    run.record("split", [run.path("context.json")], [p_in, p_tgt, meta], seed)
    print(f"split: input {pair.input_ctx.n_edges} edges, target {pair.target_ctx.n_edges} edges")


def stage_concepts(run: Run) -> None:
    ctx = load_context(run.require("input_context.json", "split"))
    lattice = enumerate_concepts(ctx, max_concepts=run.cfg["budget"]["max_concepts"])
    out = run.path("concepts.jsonl")
    concepts_to_jsonl(lattice, out)
    run.record("concepts", [run.path("input_context.json")], [out], run.cfg["seed"])
    print(f"concepts: {len(lattice.concepts)} concepts")


def stage_covers(run: Run) -> None:
    ctx = load_context(run.require("input_context.json", "split"))
    lattice = concepts_from_jsonl(run.require("concepts.jsonl", "concepts"),
                                  ctx.n_objects, ctx.n_attributes)
    covers = cover_relation(lattice)
    out = run.path("covers.jsonl")
    covers_to_jsonl(covers, out)
    run.record("covers", [run.path("concepts.jsonl")], [out], run.cfg["seed"])
    print(f"covers: {len(covers)} cover pairs")


def _encoder_config(run: Run, vocab: Vocab, lattice, side: str, seed: int) -> EncoderConfig:
    ecfg = run.cfg["encoder"]
    sets = [c.extent for c in lattice.concepts] if side == "object" else [c.intent for c in lattice.concepts]
    longest = max((len(s) for s in sets), default=0)
    return EncoderConfig(
        d_model=ecfg["d_model"], n_layers=ecfg["n_layers"], n_heads=ecfg["n_heads"],
        d_ff=ecfg["d_ff"], vocab_size=vocab.size,
        max_len=default_max_len(longest, cap=ecfg["max_len_cap"]),
        dropout=ecfg["dropout"], seed=seed,
    )


def stage_pretrain(run: Run) -> None:
    ctx = load_context(run.require("input_context.json", "split"))
    lattice = concepts_from_jsonl(run.require("concepts.jsonl", "concepts"),
                                  ctx.n_objects, ctx.n_attributes)
    lattice.covers = covers_from_jsonl(run.require("covers.jsonl", "covers"))
    obj_vocab, attr_vocab = _vocabs(run)
    pcfg = run.cfg["pretrain"]
    heldout_report = {}
    outputs = []
    for side, vocab, seed_off in (
        ("object", obj_vocab, SEED_OBJECT_MODEL),
        ("attribute", attr_vocab, SEED_ATTRIBUTE_MODEL),
    ):
        seed = run.cfg["seed"] + seed_off
        pset = build_pretrain_set(
            lattice, side, vocab, mask_rate=pcfg["mask_rate"],
            seed=run.cfg["seed"] + SEED_PAIRS, holdout_fraction=pcfg["holdout_fraction"],
            max_len_cap=run.cfg["encoder"]["max_len_cap"],
        )
        config = _encoder_config(run, vocab, lattice, side, seed)
        ckpt = run.path(f"{side}.ckpt")
        curve = run.path(f"pretrain_{side}_curve.csv")
        model, history = run_pretrain(
            config, pset, epochs=pcfg["epochs"], batch_size=pcfg["batch_size"],
            lr=pcfg["lr"], checkpoint_path=ckpt, curve_path=curve,
            checkpoint_meta={"config_hash": run.hash, "side": side},
        )
        vocab_path = run.path(f"{side}_vocab.json")
        vocab.save(vocab_path)
        outputs += [ckpt, curve, vocab_path]
        if pset.heldout is not None:
            heldout_report[side] = eval_ncp_heldout(model, pset.heldout, pset.heldout_labels)
        print(f"pretrain[{side}]: {len(history)} epochs, final joint loss "
              f"{history[-1]['joint']:.4f}")
    report = run.write_json("ncp_heldout.json", heldout_report)
    outputs.append(report)
    run.record("pretrain",
               [run.path("concepts.jsonl"), run.path("covers.jsonl")], outputs,
               run.cfg["seed"])


def _samples_for_task(run: Run, task: str) -> LinkSamples:
    split = _load_split(run)
    fcfg = run.cfg["finetune"]
    seed = run.cfg["seed"] + SEED_SAMPLES
    if task == "oo":
        return gen_oo_samples(split, l_m=fcfg["l_m"], seed=seed, balance=fcfg["balance"],
                              test_fraction=fcfg["test_fraction"],
                              max_groups=run.cfg["budget"]["max_groups"])
    return gen_oa_samples(split, seed=seed, balance=fcfg["balance"],
                          test_fraction=fcfg["test_fraction"])


def _save_samples(path: Path, samples: LinkSamples, which: str) -> None:
    cand, labels = samples.test() if which == "test" else samples.train()
    lines = ["candidate,label"]
    for c, y in zip(cand, labels):
        lines.append("|".join(str(x) for x in c) + f",{int(y)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _load_samples_csv(path: Path) -> tuple[list[tuple[int, ...]], np.ndarray]:
    lines = path.read_text(encoding="utf-8").strip().splitlines()[1:]
    cands, labels = [], []
    for line in lines:
        c, y = line.rsplit(",", 1)
        cands.append(tuple(int(x) for x in c.split("|")))
        labels.append(int(y))
    return cands, np.array(labels, dtype=np.int64)


def stage_finetune_oo(run: Run, ablate: bool = False) -> None:
    obj_vocab, _ = _vocabs(run)
    fcfg = run.cfg["finetune"]
    samples = _samples_for_task(run, "oo")
    prefix = "ablate_" if ablate else ""
    seed = run.cfg["seed"] + (SEED_ABLATE if ablate else SEED_FINETUNE)
    if ablate:
        ckpt_path = run.require("object.ckpt", "pretrain")
        pre, _ = load_checkpoint(ckpt_path)
        base = Model(EncoderConfig(**{**pre.config.to_dict(), "seed": seed}))
        inputs = [ckpt_path]
    else:
        ckpt_path = run.require("object.ckpt", "pretrain")
        base, _ = load_checkpoint(ckpt_path)
        inputs = [ckpt_path]
    model, history = finetune_oo(base, obj_vocab, samples, epochs=fcfg["epochs"],
                                 batch_size=fcfg["batch_size"], lr=fcfg["lr"], seed=seed)
    out_ckpt = run.path(f"{prefix}oo_model.ckpt")
    save_checkpoint(out_ckpt, model, extra_meta={"config_hash": run.hash, "task": "oo"})
    test_path = run.path(f"{prefix}oo_test_samples.csv")
    _save_samples(test_path, samples, "test")
    curve = run.write_json(f"{prefix}oo_train.json",
                           {"history": history, "n_train": len(samples.train_idx),
                            "n_test": len(samples.test_idx)})
    run.record(f"{prefix}finetune-oo", inputs, [out_ckpt, test_path, curve], seed)
    print(f"{prefix}finetune-oo: final loss {history[-1]['loss']:.4f}, "
          f"{len(samples.train_idx)} train / {len(samples.test_idx)} test samples")


def stage_finetune_oa(run: Run, ablate: bool = False) -> None:
    obj_vocab, attr_vocab = _vocabs(run)
    fcfg = run.cfg["finetune"]
    samples = _samples_for_task(run, "oa")
    prefix = "ablate_" if ablate else ""
    seed = run.cfg["seed"] + (SEED_ABLATE if ablate else SEED_FINETUNE)
    obj_ckpt = run.require("object.ckpt", "pretrain")
    attr_ckpt = run.require("attribute.ckpt", "pretrain")
    obj_pre, _ = load_checkpoint(obj_ckpt)
    attr_pre, _ = load_checkpoint(attr_ckpt)
    if ablate:
        obj_pre = Model(EncoderConfig(**{**obj_pre.config.to_dict(), "seed": seed}))
        attr_pre = Model(EncoderConfig(**{**attr_pre.config.to_dict(), "seed": seed + 1}))
    m_obj, m_attr, history = finetune_oa(
        obj_pre, attr_pre, obj_vocab, attr_vocab, samples,
        epochs=fcfg["epochs"], batch_size=fcfg["batch_size"], lr=fcfg["lr"], seed=seed,
    )
    out_obj = run.path(f"{prefix}oa_object_tower.ckpt")
    out_attr = run.path(f"{prefix}oa_attribute_tower.ckpt")
    save_checkpoint(out_obj, m_obj, extra_meta={"config_hash": run.hash, "task": "oa"})
    save_checkpoint(out_attr, m_attr, extra_meta={"config_hash": run.hash, "task": "oa"})
    test_path = run.path(f"{prefix}oa_test_samples.csv")
    _save_samples(test_path, samples, "test")
    curve = run.write_json(f"{prefix}oa_train.json",
                           {"history": history, "n_train": len(samples.train_idx),
                            "n_test": len(samples.test_idx)})
    run.record(f"{prefix}finetune-oa", [obj_ckpt, attr_ckpt],
               [out_obj, out_attr, test_path, curve], seed)
    print(f"{prefix}finetune-oa: final loss {history[-1]['loss']:.4f}, "
          f"{len(samples.train_idx)} train / {len(samples.test_idx)} test samples")


def stage_predict(run: Run, ablate: bool = False) -> None:
    task = run.cfg["finetune"]["task"]
    prefix = "ablate_" if ablate else ""
    obj_vocab, attr_vocab = _vocabs(run)
    if task == "oo":
        model, _ = load_checkpoint(run.require(f"{prefix}oo_model.ckpt", f"{prefix}finetune-oo"))
        cands, labels = _load_samples_csv(run.require(f"{prefix}oo_test_samples.csv",
                                                      f"{prefix}finetune-oo"))
        report = predict_oo(model, obj_vocab, cands, labels=labels)
    elif task == "oa":
        m_obj, _ = load_checkpoint(run.require(f"{prefix}oa_object_tower.ckpt",
                                               f"{prefix}finetune-oa"))
        m_attr, _ = load_checkpoint(run.require(f"{prefix}oa_attribute_tower.ckpt",
                                                f"{prefix}finetune-oa"))
        cands, labels = _load_samples_csv(run.require(f"{prefix}oa_test_samples.csv",
                                                      f"{prefix}finetune-oa"))
        report = predict_oa(m_obj, m_attr, obj_vocab, attr_vocab, cands, labels=labels)
    else:
        raise UsageError(f"finetune.task must be 'oo' or 'oa', got {task!r}")
    out = run.path(f"{prefix}predictions_{task}.csv")
    report.to_csv(out)
    run.record(f"{prefix}predict", [], [out], run.cfg["seed"])
    print(f"{prefix}predict[{task}]: {len(report)} candidates scored")


def stage_eval(run: Run, ablate: bool = False) -> None:
    task = run.cfg["finetune"]["task"]
    prefix = "ablate_" if ablate else ""
    pred_path = run.require(f"{prefix}predictions_{task}.csv", f"{prefix}predict")
    report = PredictionReport.from_csv(pred_path, task=task)
    if report.labels is None:
        raise DataError("predictions file has no labels; cannot evaluate")
    summary = metrics.metric_report(report.scores, report.labels)
    out = run.write_json(f"{prefix}metrics_{task}.json", summary)
    run.record(f"{prefix}eval", [pred_path], [out], run.cfg["seed"])
    print(f"{prefix}eval[{task}]: " + json.dumps(summary, sort_keys=True))


def stage_baseline(run: Run) -> None:
    task = run.cfg["finetune"]["task"]
    split = _load_split(run)
    samples = _samples_for_task(run, task)
    cands, labels = samples.test()
    bcfg = run.cfg["baseline"]
    results: dict = {}
    if task == "oo":
        scores = baselines.score_pairs_oo(split.input_ctx, cands)
        results["common_neighbors"] = metrics.metric_report(scores, labels)
        pred = PredictionReport(task="oo", candidates=cands, scores=scores, labels=labels)
    else:
        scores = baselines.score_pairs_oa(split.input_ctx, cands)
        results["common_neighbors"] = metrics.metric_report(scores, labels)
        mf = baselines.train_mf(split.input_ctx, k=min(bcfg["mf_rank"],
                                                       split.input_ctx.n_objects,
                                                       split.input_ctx.n_attributes),
                                lam=bcfg["mf_reg"], epochs=bcfg["mf_epochs"],
                                seed=run.cfg["seed"])
        mf_scores = baselines.score_pairs_mf(mf, cands)
        results["matrix_factorization"] = metrics.metric_report(mf_scores, labels)
        pred = PredictionReport(task="oa", candidates=cands, scores=scores, labels=labels)
    pred_path = run.path(f"baseline_predictions_{task}.csv")
    pred.to_csv(pred_path)
    out = run.write_json(f"baseline_metrics_{task}.json", results)
    run.record("baseline", [run.path("input_context.json")], [pred_path, out],
               run.cfg["seed"])
    print(f"baseline[{task}]: " + json.dumps(results, sort_keys=True))


def stage_ablate(run: Run) -> None:
    """Fine-tune from random initialization and evaluate, for comparison."""
    task = run.cfg["finetune"]["task"]
    if task == "oo":
        stage_finetune_oo(run, ablate=True)
    else:
        stage_finetune_oa(run, ablate=True)
    stage_predict(run, ablate=True)
    stage_eval(run, ablate=True)


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="latticelink",
        description="Concept-lattice link prediction pipeline",
    )
    parser.add_argument("--config", help="JSON run configuration")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out-dir", default="runs/default", help="run directory")
    sub = parser.add_subparsers(dest="command")
    p_ingest = sub.add_parser("ingest", help="load and validate an edge list")
    p_ingest.add_argument("--edges", help="edge-list path (overrides config data.edges)")
    sub.add_parser("split", help="derive input/target networks")
    sub.add_parser("concepts", help="enumerate formal concepts of the input network")
    sub.add_parser("covers", help="extract the lattice cover relation")
    sub.add_parser("pretrain", help="pre-train the object and attribute models")
    sub.add_parser("finetune-oo", help="fine-tune for object-group link prediction")
    sub.add_parser("finetune-oa", help="fine-tune the twin towers for pair prediction")
    sub.add_parser("predict", help="score the held-out candidates")
    sub.add_parser("eval", help="compute metrics from saved predictions")
    sub.add_parser("baseline", help="score the same split with reference predictors")
    sub.add_parser("ablate-no-pretrain",
                   help="fine-tune from random initialization for comparison")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    if not args.command:
        parser.print_help()
        return 1
    try:
        cfg = load_config(args.config, args.seed)
        run = Run(Path(args.out_dir), cfg)
        if args.command == "ingest":
            stage_ingest(run, args.edges)
        elif args.command == "split":
            stage_split(run)
        elif args.command == "concepts":
            stage_concepts(run)
        elif args.command == "covers":
            stage_covers(run)
        elif args.command == "pretrain":
            stage_pretrain(run)
        elif args.command == "finetune-oo":
            stage_finetune_oo(run)
        elif args.command == "finetune-oa":
            stage_finetune_oa(run)
        elif args.command == "predict":
            stage_predict(run)
        elif args.command == "eval":
            stage_eval(run)
        elif args.command == "baseline":
            stage_baseline(run)
        elif args.command == "ablate-no-pretrain":
            stage_ablate(run)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except (ConceptBudgetError, BudgetExceededError) as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (DataError, EdgeListParseError, FileNotFoundError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
