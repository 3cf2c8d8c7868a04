"""End-to-end orchestration: space, graph, covering, trees, embeddings,
verification suites, artifact files.

A run is deterministic for a fixed config: identical configs produce
byte-identical reports (no timestamps, sorted keys, exact rationals).
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from qtrees import approx, coverings, labelling, metric, stage1 as stage1_mod
from qtrees.approx import ApproxGraph, approx_suite, estimate_delta, \
    export_edges, graph_summary, visual_metric_constants
from qtrees.coverings import CoveringSequence, \
    generate_covering_sequence, save_covering_json, validate_covering_sequence
from qtrees.labelling import Stage2, build_labelling, build_stage2, \
    check_binary_stage, check_net_coloring, check_sentences, embedding_dump, \
    min_kappa, stage2_suite
from qtrees.metric import FiniteMetricSpace, ScaleParams, generate_space, \
    load_space_csv
from qtrees.presets import PipelineConfig
from qtrees.reporting import dump_json, jsonable, suite_dict
from qtrees.stage1 import Stage1, embed_stage1, stage1_suite, write_pairs_csv
from qtrees.trees import check_color_tree, export_tree


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"[{stage}] {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class PipelineResult:
    config: PipelineConfig
    space: FiniteMetricSpace
    graph: ApproxGraph
    seq: CoveringSequence
    stage1: Stage1
    stage2: Stage2
    report: dict
    ok: bool
    pair_rows: list = field(default_factory=list)


def build_space(config: PipelineConfig) -> FiniteMetricSpace:
    if config.space_file:
        return load_space_csv(config.space_file)
    return generate_space(config.space_kind, config.space_param)


def run_pipeline(config: PipelineConfig, write_artifacts: bool = True
                 ) -> PipelineResult:
    suites: dict[str, dict] = {}

    def guard(stage, fn):
        try:
            return fn()
        except Exception as exc:  # surfaced with the stage name
            raise StageError(stage, exc) from exc

    space = guard("space", lambda: build_space(config))
    scale = guard("space", lambda: ScaleParams.for_space(
        space, config.r, config.max_level))
    graph = guard("approximation", lambda: approx.build_approximation(
        space, scale))

    approx_checks = approx_suite(graph)
    delta, delta_mode = estimate_delta(graph, seed=config.seed)
    suites["approx"] = suite_dict("approx", approx_checks)
    suites["approx"]["delta"] = delta
    suites["approx"]["deltaMode"] = delta_mode

    seq = guard("covering", lambda: generate_covering_sequence(
        config.covering_kind, space, scale, scale.max_level,
        graph=graph, n_colors=config.n_colors, **config.params()))
    cov_check = validate_covering_sequence(seq, graph=graph, scale=scale)
    suites["covering"] = suite_dict("covering", [cov_check])
    # reported, never asserted: how deep inside members the points sit
    suites["covering"]["lebesgue"] = {
        str(j): coverings.lebesgue_number(seq.family(j), space)
        for j in sorted(seq.levels)
    }

    tree_checks = [
        check_color_tree(seq, tree, scale.k0)
        for tree in (stage1_mod.build_color_tree(seq, c) for c in seq.colors)
    ]
    emb = guard("stage1", lambda: embed_stage1(graph, seq))
    s1_checks, pair_rows = stage1_suite(emb)
    suites["stage1"] = suite_dict("stage1", tree_checks + s1_checks)

    lab = guard("labelling", lambda: build_labelling(emb))
    kappa = config.kappa if config.kappa is not None else min_kappa(
        len(seq.colors))
    st2 = guard("stage2", lambda: build_stage2(
        lab, kappa, research_kappa=config.research_kappa))
    s2_checks, fits = stage2_suite(st2)
    s2_checks.append(check_net_coloring(graph, lab.coloring))
    s2_checks.append(check_sentences(lab))
    s2_checks.append(check_binary_stage(st2))
    suites["stage2"] = suite_dict("stage2", s2_checks)
    suites["stage2"]["fit"] = jsonable(fits)

    band = None
    if sum(1 for v in graph.vertices if v.level == scale.max_level) >= 2:
        band = visual_metric_constants(graph)

    ok = all(s["ok"] for s in suites.values())
    report = {
        "config": _config_dict(config, kappa),
        "graph": graph_summary(graph, delta=delta, band=band),
        "doubling": metric.doubling_estimate(space),
        "palette": lab.coloring.palette_size,
        "treeValence": {str(c): emb.trees[c].max_valence()
                        for c in seq.colors},
        "suites": suites,
        "ok": ok,
    }

    result = PipelineResult(config=config, space=space, graph=graph, seq=seq,
                            stage1=emb, stage2=st2, report=report, ok=ok,
                            pair_rows=pair_rows)
    if write_artifacts and config.out_dir:
        export_artifacts(result, config.out_dir)
    return result


def _config_dict(config: PipelineConfig, kappa: int) -> dict:
    return {
        "space": config.space_file or
                 f"{config.space_kind}({config.space_param})",
        "r": config.r,
        "maxLevel": config.max_level,
        "covering": config.covering_kind,
        "colors": config.n_colors,
        "kappa": kappa,
        "seed": config.seed,
        "preset": config.preset,
        # presets pin parameter tuples known to validate; anything else is
        # exploratory and marked as such
        "pinned": bool(config.preset),
    }


def export_artifacts(result: PipelineResult, out_dir) -> None:
    os.makedirs(out_dir, exist_ok=True)
    dump_json(result.report, os.path.join(out_dir, "report.json"))
    export_edges(result.graph, os.path.join(out_dir, "graph.edges"))
    save_covering_json(result.seq, os.path.join(out_dir, "covering.json"))
    tree_dir = os.path.join(out_dir, "trees")
    os.makedirs(tree_dir, exist_ok=True)
    for c, tree in result.stage1.trees.items():
        export_tree(tree, os.path.join(tree_dir, f"color{c}.txt"))
    rows = result.pair_rows or stage1_suite(result.stage1)[1]
    write_pairs_csv(rows, os.path.join(out_dir, "pairs.csv"))
    dump_json(embedding_dump(result.stage2),
              os.path.join(out_dir, "embedding.json"))


# ---------------------------------------------------------------------------
# Named verification suites for the CLI


def run_suite(config: PipelineConfig, suite: str) -> dict:
    """Run one named suite (or "all"); codec and sequence suites are
    config-independent."""
    from qtrees import verify as verify_mod

    return verify_mod.run_suite(config, suite)
