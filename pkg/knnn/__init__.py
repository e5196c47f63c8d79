"""
knnn — nearest-neighbors-of-neighbors anomaly detection

Scores embedding vectors with the k-NNN operator and its three ablation
baselines (plain k-NN, global and local eigen normalization). Ships the
synthetic 2-D benchmarks, AUROC evaluation and a binary model format.

Usage:
    python -m knnn synth --shape moons --out-prefix runs/moons
    python -m knnn build --train runs/moons_train.csv --out runs/moons.knnn
    python -m knnn score --model runs/moons.knnn --queries runs/moons_test.csv --out runs/scores.csv
    python -m knnn eval --scores runs/scores.csv --labels runs/moons_labels.csv
"""

__version__ = "1.0"
