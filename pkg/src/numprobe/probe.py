"""Single-hidden-layer MLP probe over fixed embeddings.

Forward pass: rectifier hidden layer, two-way softmax head. Training uses
adaptive-moment updates with seeded shuffling; the returned model is the
parameter snapshot with the best validation accuracy (earliest epoch wins
ties). All arithmetic runs in double precision; inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from numprobe.embed_io import EmbeddingSet, read_checkpoint, write_checkpoint

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

PARAM_NAMES = ("W1", "b1", "W2", "b2")


@dataclass(frozen=True)
class ProbeConfig:
    input_dim: int
    hidden_dim: int = 256
    epochs: int = 20
    learning_rate: float = 1e-5
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.input_dim < 1 or self.hidden_dim < 1:
            raise ValueError("dimensions must be positive")
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not self.learning_rate > 0:
            raise ValueError("learning rate must be positive")
        if self.batch_size < 1:
            raise ValueError("minibatch size must be >= 1")


@dataclass
class ProbeModel:
    W1: np.ndarray  # (hidden, d)
    b1: np.ndarray  # (hidden,)
    W2: np.ndarray  # (2, hidden)
    b2: np.ndarray  # (2,)

    @classmethod
    def initialize(cls, cfg: ProbeConfig,
                   rng: np.random.Generator) -> "ProbeModel":
        d, h = cfg.input_dim, cfg.hidden_dim
        return cls(
            W1=rng.normal(0.0, np.sqrt(2.0 / d), size=(h, d)),
            b1=np.zeros(h),
            W2=rng.normal(0.0, np.sqrt(2.0 / h), size=(2, h)),
            b2=np.zeros(2),
        )

    @property
    def input_dim(self) -> int:
        return self.W1.shape[1]

    @property
    def hidden_dim(self) -> int:
        return self.W1.shape[0]

    def params(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> "ProbeModel":
        return ProbeModel(**{k: v.copy() for k, v in self.params().items()})

    def save(self, path: str | Path, meta: dict | None = None) -> Path:
        return write_checkpoint(path, self.params(), meta)

    @classmethod
    def load(cls, path: str | Path) -> tuple["ProbeModel", dict]:
        params, meta = read_checkpoint(path)
        missing = set(PARAM_NAMES) - set(params)
        if missing:
            raise ValueError(f"checkpoint missing parameters {sorted(missing)}")
        return cls(**{name: params[name] for name in PARAM_NAMES}), meta


@dataclass(frozen=True)
class EpochStats:
    epoch: int
    train_loss: float
    val_accuracy: float


@dataclass(frozen=True)
class TrainResult:
    model: ProbeModel
    history: tuple[EpochStats, ...]
    best_epoch: int

    @property
    def best_val_accuracy(self) -> float:
        return self.history[self.best_epoch].val_accuracy


def _as_batch(x: np.ndarray, dim: int) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != dim:
        raise ValueError(f"expected vectors of dimension {dim}, "
                         f"got shape {x.shape}")
    return x


def _logits(model: ProbeModel, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    hidden = np.maximum(x @ model.W1.T + model.b1, 0.0)
    return hidden @ model.W2.T + model.b2, hidden


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def forward(model: ProbeModel, x: np.ndarray) -> np.ndarray:
    """Class probabilities; accepts one vector or a batch."""
    batch = _as_batch(x, model.input_dim)
    probs = _softmax(_logits(model, batch)[0])
    return probs[0] if np.asarray(x).ndim == 1 else probs


def loss_and_grad(model: ProbeModel, x: np.ndarray, y: np.ndarray
                  ) -> tuple[float, dict[str, np.ndarray]]:
    """Mean cross-entropy over the batch and gradients for all parameters."""
    batch = _as_batch(x, model.input_dim)
    labels = np.asarray(y, dtype=np.int64).ravel()
    if len(labels) != len(batch):
        raise ValueError(f"{len(batch)} vectors but {len(labels)} labels")
    if len(batch) == 0:
        raise ValueError("empty batch")
    if not np.isfinite(batch).all():
        raise ValueError("non-finite input vector")
    n = len(batch)
    logits, hidden = _logits(model, batch)
    shifted = logits - logits.max(axis=1, keepdims=True)
    log_norm = np.log(np.exp(shifted).sum(axis=1))
    log_probs = shifted - log_norm[:, None]
    loss = float(-log_probs[np.arange(n), labels].mean())

    d_logits = np.exp(log_probs)
    d_logits[np.arange(n), labels] -= 1.0
    d_logits /= n
    d_hidden = (d_logits @ model.W2) * (hidden > 0.0)
    grads = {
        "W2": d_logits.T @ hidden,
        "b2": d_logits.sum(axis=0),
        "W1": d_hidden.T @ batch,
        "b1": d_hidden.sum(axis=0),
    }
    return loss, grads


def evaluate(model: ProbeModel, data: EmbeddingSet) -> float:
    """Argmax accuracy; ties break toward class 0."""
    probs = forward(model, data.vectors)
    predictions = np.argmax(probs, axis=1)  # first max wins, so ties pick 0
    return float((predictions == data.labels).mean())


def train_probe(train: EmbeddingSet, val: EmbeddingSet,
                cfg: ProbeConfig) -> TrainResult:
    """Seeded minibatch training with a best-validation snapshot."""
    if train.dim != cfg.input_dim or val.dim != cfg.input_dim:
        raise ValueError(
            f"config expects dimension {cfg.input_dim}, embeddings have "
            f"{train.dim} (train) and {val.dim} (val)")
    rng = np.random.default_rng(cfg.seed)
    model = ProbeModel.initialize(cfg, rng)
    x_train = train.vectors.astype(np.float64)
    y_train = train.labels.astype(np.int64)
    n = len(x_train)

    moments = {k: (np.zeros_like(v), np.zeros_like(v))
               for k, v in model.params().items()}
    step = 0
    best = model.copy()
    best_acc = -1.0
    best_epoch = 0
    history = []
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        epoch_loss = 0.0
        for start in range(0, n, cfg.batch_size):
            idx = order[start:start + cfg.batch_size]
            loss, grads = loss_and_grad(model, x_train[idx], y_train[idx])
            if not np.isfinite(loss):
                raise RuntimeError(
                    f"non-finite loss at epoch {epoch}, step {step}: "
                    f"lower the learning rate or check the embeddings")
            epoch_loss += loss * len(idx)
            step += 1
            for name, grad in grads.items():
                m, v = moments[name]
                m += (1 - ADAM_BETA1) * (grad - m)
                v += (1 - ADAM_BETA2) * (grad * grad - v)
                m_hat = m / (1 - ADAM_BETA1 ** step)
                v_hat = v / (1 - ADAM_BETA2 ** step)
                getattr(model, name)[...] -= (
                    cfg.learning_rate * m_hat / (np.sqrt(v_hat) + ADAM_EPS))
        val_acc = evaluate(model, val)
        history.append(EpochStats(epoch, epoch_loss / n, val_acc))
        if val_acc > best_acc:
            best, best_acc, best_epoch = model.copy(), val_acc, epoch
    return TrainResult(best, tuple(history), best_epoch)
