"""Run the exhaustive pattern survey and print a verdict summary.

    python3 scripts/run_survey.py --p 3 --dedup --out survey_p3.csv
"""
import argparse
from collections import Counter

from dustcarpet.survey import SurveyConfig, run_survey, write_survey


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=3)
    ap.add_argument("--dedup", action="store_true")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--out", default="survey.csv")
    args = ap.parse_args()

    records = run_survey(SurveyConfig(p=args.p, dedup=args.dedup), args.workers)
    write_survey(records, "json" if args.out.endswith(".json") else "csv", args.out)

    print(f"{len(records)} records written to {args.out}")
    for verdict, n in sorted(Counter(r.verdict for r in records).items()):
        print(f"  {verdict:<22} {n}")
    fams = Counter(";".join(f"{r}:{k}" for r, k in rec.families) for rec in records if rec.verdict == "DustType")
    print("combined families (r:order) among dust patterns:")
    for key, n in fams.most_common():
        print(f"  {key:<12} {n}")


if __name__ == "__main__":
    main()
