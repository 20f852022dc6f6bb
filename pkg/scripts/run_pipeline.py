"""Generate an ECHP-like synthetic sample and run every analysis on it.

    python3 scripts/run_pipeline.py --out runs/demo --seed 0

Prints the headline numbers of each analysis: MCA inertia, modality map
separation, super-class sizes, the score map and the calibrated threshold.
"""
import argparse
import json
from pathlib import Path

from livingsom import pipeline
from livingsom.synthetic import echp_spec, generate_synthetic


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs/demo")
    ap.add_argument("--n", type=int, default=6458)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--data-seed", type=int, default=1)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    data = out / "households.csv"
    generate_synthetic(echp_spec(n=args.n), seed=args.data_seed).to_csv(data)
    cfg = pipeline.PipelineConfig(data=str(data), out=str(out / "artifacts"), seed=args.seed)
    for cmd in (pipeline.cmd_mca, pipeline.cmd_map_modalities, pipeline.cmd_map_households,
                pipeline.cmd_map_scores, pipeline.cmd_threshold):
        cmd(cfg)

    def results(name):
        return json.loads((Path(cfg.out) / name / "metadata.json").read_text())["results"]

    mca = results("mca")
    print(f"MCA: {mca['n_axes']} axes, total inertia {mca['total_inertia']:.4f}")
    for topo, r in results("modalities")["maps"].items():
        sep = r["separation"]
        print(f"modalities {topo}: {r['occupied_units']} occupied units, polarity separation "
              f"{sep['observed']:.3f} vs shuffled {sep['mean']:.3f}")
    hh = results("households")
    print(f"households {hh['topology']}: super-class sizes {hh['superclass_sizes']}, "
          f"groups {hh['groups']}, TE {hh['quality']['topographic_error']:.3f}")
    sc = results("scores")
    shares = ", ".join(f"{k}: {v:.1f}%" for k, v in sc["class_shares"].items())
    print(f"score map {sc['topology']}: {shares}")
    th = results("threshold")
    print(f"poverty rate {th['target_rate']:.2f}% -> threshold {th['threshold']} "
          f"(households at or above: {th['matched_cumulative']:.2f}%)")


if __name__ == "__main__":
    main()
