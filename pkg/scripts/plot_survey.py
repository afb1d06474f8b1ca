#!/usr/bin/env python3
"""Render the desktop-vs-VR stacked proportion bars from the bundled survey
dataset (one PNG per question).

Usage: python scripts/plot_survey.py [--out-dir survey_out]
"""

from __future__ import annotations

import argparse
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from veld.survey import Mode, bundled_responses, summarize

RATING_LABELS = {
    1: "Strongly Disagree",
    2: "Disagree",
    3: "Neither Agree nor Disagree",
    4: "Agree",
    5: "Strongly Agree",
}
COLORS = {1: "#4878d0", 2: "#ee854a", 3: "#d65f5f", 4: "#6acc64", 5: "#956cb4"}
TITLES = {
    "present": 'Responses to "I feel present"',
    "enjoy": 'Responses to "I enjoyed my time"',
}


def plot_question(question: str, out_path: str) -> None:
    responses = bundled_responses()
    fig, ax = plt.subplots(figsize=(4, 4))
    modes = [Mode.DESKTOP, Mode.VR]
    bottoms = {mode: 0.0 for mode in modes}
    for rating in range(1, 6):
        heights = []
        for mode in modes:
            summary = summarize(responses, question, mode)
            fraction = float(summary.proportions.get(rating, 0))
            heights.append(fraction)
        if any(h > 0 for h in heights):
            ax.bar(
                [m.value.capitalize() for m in modes],
                heights,
                bottom=[bottoms[m] for m in modes],
                color=COLORS[rating],
                label=RATING_LABELS[rating],
                width=0.5,
            )
            for mode, height in zip(modes, heights):
                if height > 0:
                    ax.text(
                        mode.value.capitalize(),
                        bottoms[mode] + height / 2,
                        f"{height:.2f}".rstrip("0").rstrip("."),
                        ha="center",
                        va="center",
                        fontsize=9,
                    )
                bottoms[mode] += height
    ax.set_ylabel("Proportion of Subjects")
    ax.set_title(TITLES.get(question, question))
    ax.legend(loc="center left", bbox_to_anchor=(1.02, 0.5), fontsize=8)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    print(f"wrote {out_path}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="survey_out")
    args = parser.parse_args()
    os.makedirs(args.out_dir, exist_ok=True)
    for question in ("present", "enjoy"):
        plot_question(question, os.path.join(args.out_dir, f"{question}.png"))


if __name__ == "__main__":
    main()
