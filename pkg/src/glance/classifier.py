"""Small feed-forward classifier over binary-image feature vectors.

One tanh hidden layer (10 units) with a softmax readout, trained by
full-batch gradient descent with momentum and early stopping on a held
out validation split. Everything is plain numpy and seeded, so a given
(dataset, seed) pair trains to the same weights on every platform.
"""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field

import numpy as np

from .errors import DatasetTooSmallError, DimensionMismatchError, SingleClassTrainError
from .features import Combo, FeatureRecord, combo

HIDDEN_UNITS = 10
LEARNING_RATE = 0.05
MOMENTUM = 0.9
MAX_EPOCHS = 2000
PATIENCE = 20

SPLIT_FRACTIONS = (0.55, 0.10, 0.35)
MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class SplitDataset:
    """Train / validation / test partition of labeled records."""

    train: tuple[tuple[FeatureRecord, str], ...]
    validation: tuple[tuple[FeatureRecord, str], ...]
    test: tuple[tuple[FeatureRecord, str], ...]


def _largest_remainder_sizes(n: int, fractions: tuple[float, ...]) -> list[int]:
    """Integer part sizes summing to n, one unit at a time to the
    largest fractional remainders (ties broken by earlier position)."""
    exact = [n * f for f in fractions]
    sizes = [int(e) for e in exact]
    order = sorted(range(len(exact)), key=lambda i: (-(exact[i] - sizes[i]), i))
    for i in range(n - sum(sizes)):
        sizes[order[i]] += 1
    return sizes


def split(items: tuple[tuple[FeatureRecord, str], ...] | list, seed: int) -> SplitDataset:
    """Shuffle and partition 55% / 10% / 35% by largest remainder."""
    items = tuple(items)
    if len(items) < 20:
        raise DatasetTooSmallError(f"need at least 20 items to split, got {len(items)}")
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(items))
    shuffled = [items[i] for i in order]
    n_train, n_val, n_test = _largest_remainder_sizes(len(items), SPLIT_FRACTIONS)
    return SplitDataset(
        train=tuple(shuffled[:n_train]),
        validation=tuple(shuffled[n_train : n_train + n_val]),
        test=tuple(shuffled[n_train + n_val :]),
    )


@dataclass(frozen=True)
class NetworkModel:
    """Trained network weights plus the input normalization it expects."""

    combo: Combo
    class_names: tuple[str, ...]
    mean: np.ndarray
    std: np.ndarray
    w1: np.ndarray   # (dim, HIDDEN_UNITS)
    b1: np.ndarray   # (HIDDEN_UNITS,)
    w2: np.ndarray   # (HIDDEN_UNITS, n_classes)
    b2: np.ndarray   # (n_classes,)
    epochs_run: int
    final_validation_loss: float

    def to_json(self) -> str:
        payload = {
            "format_version": MODEL_FORMAT_VERSION,
            "combo": self.combo.name,
            "class_names": list(self.class_names),
            "mean": self.mean.tolist(),
            "std": self.std.tolist(),
            "w1": self.w1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2.tolist(),
            "epochs_run": self.epochs_run,
            "final_validation_loss": self.final_validation_loss,
        }
        return json.dumps(payload, indent=2) + "\n"

    @staticmethod
    def from_json(text: str) -> "NetworkModel":
        payload = json.loads(text)
        version = payload.get("format_version")
        if version != MODEL_FORMAT_VERSION:
            raise ValueError(f"unsupported model format version: {version!r}")
        return NetworkModel(
            combo=Combo[payload["combo"]],
            class_names=tuple(payload["class_names"]),
            mean=np.asarray(payload["mean"], dtype=np.float64),
            std=np.asarray(payload["std"], dtype=np.float64),
            w1=np.asarray(payload["w1"], dtype=np.float64),
            b1=np.asarray(payload["b1"], dtype=np.float64),
            w2=np.asarray(payload["w2"], dtype=np.float64),
            b2=np.asarray(payload["b2"], dtype=np.float64),
            epochs_run=int(payload["epochs_run"]),
            final_validation_loss=float(payload["final_validation_loss"]),
        )


def _design_matrix(items, which: Combo) -> np.ndarray:
    return np.asarray([combo(rec, which) for rec, _ in items], dtype=np.float64)


def _one_hot(labels, class_names: tuple[str, ...]) -> np.ndarray:
    index = {name: i for i, name in enumerate(class_names)}
    out = np.zeros((len(labels), len(class_names)), dtype=np.float64)
    for row, label in enumerate(labels):
        out[row, index[label]] = 1.0
    return out


def _init_params(rng: np.random.Generator, dim: int, n_classes: int) -> dict[str, np.ndarray]:
    return {
        "w1": rng.normal(0.0, 0.5, size=(dim, HIDDEN_UNITS)),
        "b1": np.zeros(HIDDEN_UNITS),
        "w2": rng.normal(0.0, 0.5, size=(HIDDEN_UNITS, n_classes)),
        "b2": np.zeros(n_classes),
    }


def _forward(params: dict[str, np.ndarray], x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hidden = np.tanh(x @ params["w1"] + params["b1"])
    logits = hidden @ params["w2"] + params["b2"]
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    probs = exp / exp.sum(axis=1, keepdims=True)
    return hidden, probs


def _loss_and_grads(
    params: dict[str, np.ndarray], x: np.ndarray, targets: np.ndarray
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy and its exact gradients for one full batch."""
    n = x.shape[0]
    hidden, probs = _forward(params, x)
    loss = float(-np.sum(targets * np.log(probs + 1e-15)) / n)
    d_logits = (probs - targets) / n
    d_hidden = (d_logits @ params["w2"].T) * (1.0 - hidden**2)
    grads = {
        "w2": hidden.T @ d_logits,
        "b2": d_logits.sum(axis=0),
        "w1": x.T @ d_hidden,
        "b1": d_hidden.sum(axis=0),
    }
    return loss, grads


def _mean_loss(params: dict[str, np.ndarray], x: np.ndarray, targets: np.ndarray) -> float:
    _, probs = _forward(params, x)
    return float(-np.sum(targets * np.log(probs + 1e-15)) / x.shape[0])


def train(dataset: SplitDataset, which: Combo, seed: int) -> NetworkModel:
    """Fit the network on the train split, early-stopping on validation."""
    train_labels = [label for _, label in dataset.train]
    class_names = tuple(sorted(set(train_labels)))
    if len(class_names) < 2:
        raise SingleClassTrainError(f"training split holds a single class: {class_names}")

    x_train = _design_matrix(dataset.train, which)
    mean = x_train.mean(axis=0)
    std = x_train.std(axis=0)
    std = np.where(std == 0.0, 1.0, std)
    x_train = (x_train - mean) / std
    t_train = _one_hot(train_labels, class_names)

    x_val = (_design_matrix(dataset.validation, which) - mean) / std
    t_val = _one_hot([label for _, label in dataset.validation], class_names)

    rng = np.random.default_rng(seed)
    params = _init_params(rng, which.dim, len(class_names))
    velocity = {name: np.zeros_like(value) for name, value in params.items()}

    best_val = _mean_loss(params, x_val, t_val)
    best_params = {name: value.copy() for name, value in params.items()}
    best_epoch = 0
    stale = 0
    epochs_run = 0
    for epoch in range(1, MAX_EPOCHS + 1):
        _, grads = _loss_and_grads(params, x_train, t_train)
        for name in params:
            velocity[name] = MOMENTUM * velocity[name] - LEARNING_RATE * grads[name]
            params[name] = params[name] + velocity[name]
        epochs_run = epoch
        val_loss = _mean_loss(params, x_val, t_val)
        if val_loss < best_val:
            best_val = val_loss
            best_params = {name: value.copy() for name, value in params.items()}
            best_epoch = epoch
            stale = 0
        else:
            stale += 1
            if stale >= PATIENCE:
                break

    return NetworkModel(
        combo=which,
        class_names=class_names,
        mean=mean,
        std=std,
        w1=best_params["w1"],
        b1=best_params["b1"],
        w2=best_params["w2"],
        b2=best_params["b2"],
        epochs_run=best_epoch if best_epoch else epochs_run,
        final_validation_loss=best_val,
    )


@dataclass(frozen=True)
class ConfusionMatrix:
    """Counts[i][j]: items of true class i predicted as class j."""

    class_names: tuple[str, ...]
    counts: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    @property
    def accuracy(self) -> float:
        return float(np.trace(self.counts) / self.counts.sum())

    def to_csv(self) -> str:
        lines = ["true_class," + ",".join(f"pred_{name}" for name in self.class_names)]
        for i, name in enumerate(self.class_names):
            lines.append(name + "," + ",".join(str(int(v)) for v in self.counts[i]))
        return "\n".join(lines) + "\n"


def predict(model: NetworkModel, records: list[FeatureRecord], which: Combo | None = None) -> list[str]:
    """Class name per record; `which` overrides the combo used to read
    features from the records (dims must still match the weights)."""
    if not records:
        return []
    use = which if which is not None else model.combo
    x = np.asarray([combo(rec, use) for rec in records], dtype=np.float64)
    if x.shape[1] != model.w1.shape[0]:
        raise DimensionMismatchError(
            f"model expects {model.w1.shape[0]} inputs, {use.name} gives {x.shape[1]}"
        )
    x = (x - model.mean) / model.std
    params = {"w1": model.w1, "b1": model.b1, "w2": model.w2, "b2": model.b2}
    _, probs = _forward(params, x)
    return [model.class_names[i] for i in probs.argmax(axis=1)]


def evaluate(model: NetworkModel, items, which: Combo | None = None) -> ConfusionMatrix:
    """Confusion matrix of the model over labeled items."""
    items = tuple(items)
    for _, label in items:
        if label not in model.class_names:
            raise DimensionMismatchError(f"label {label!r} unknown to the model")
    predictions = predict(model, [rec for rec, _ in items], which)
    index = {name: i for i, name in enumerate(model.class_names)}
    counts = np.zeros((len(model.class_names), len(model.class_names)), dtype=np.int64)
    for (_, label), pred in zip(items, predictions):
        counts[index[label], index[pred]] += 1
    counts.setflags(write=False)
    return ConfusionMatrix(class_names=model.class_names, counts=counts)


_TRIAL_COLUMNS = ("training", "test", "all")


@dataclass(frozen=True)
class TrialSummary:
    """Per-trial training / test / whole-set accuracies for one combo."""

    combo: Combo
    training: tuple[float, ...]
    test: tuple[float, ...]
    overall: tuple[float, ...]
    models: tuple[NetworkModel, ...] = field(repr=False, default=())

    def column(self, name: str) -> tuple[float, ...]:
        if name not in _TRIAL_COLUMNS:
            raise KeyError(name)
        return {"training": self.training, "test": self.test, "all": self.overall}[name]

    def mean(self, name: str) -> float:
        return statistics.fmean(self.column(name))

    def stdev(self, name: str) -> float:
        col = self.column(name)
        return statistics.stdev(col) if len(col) > 1 else 0.0

    @property
    def n_trials(self) -> int:
        return len(self.test)


def run_trials(items, which: Combo, n_trials: int, base_seed: int) -> TrialSummary:
    """Train and test repeatedly; trial i reshuffles with base_seed + i."""
    if n_trials < 1:
        raise ValueError("need at least one trial")
    items = tuple(items)
    training, test, overall, models = [], [], [], []
    for i in range(n_trials):
        seed = base_seed + i
        parts = split(items, seed)
        model = train(parts, which, seed)
        training.append(evaluate(model, parts.train).accuracy)
        test.append(evaluate(model, parts.test).accuracy)
        overall.append(evaluate(model, items).accuracy)
        models.append(model)
    return TrialSummary(
        combo=which,
        training=tuple(training),
        test=tuple(test),
        overall=tuple(overall),
        models=tuple(models),
    )


def trials_csv(summary: TrialSummary) -> str:
    """Trial-by-trial accuracy table: one row per trial, then average
    and standard-deviation rows; values as percentages to 2 places."""
    lines = ["trial,training,test,all"]
    for i in range(summary.n_trials):
        cells = [f"{summary.column(c)[i] * 100:.2f}" for c in _TRIAL_COLUMNS]
        lines.append(f"{i + 1}," + ",".join(cells))
    lines.append("average," + ",".join(f"{summary.mean(c) * 100:.2f}" for c in _TRIAL_COLUMNS))
    lines.append("std_dev," + ",".join(f"{summary.stdev(c) * 100:.2f}" for c in _TRIAL_COLUMNS))
    return "\n".join(lines) + "\n"
