"""Successive-cancellation symbol estimators.

Four estimators share one interface.  All of them see the stream of
matched-filter outputs y_k normalized so the center tap is 1, and all
assume zero symbols outside the transmitted block.

  * sssse      causal-only cancellation, no added delay
  * sssgbkse   causal cancellation plus go-back-K revision, delay K
  * mlisic     layered two-sided cancellation, delay layers*(span-1)
  * imlisic    layered two-sided cancellation with per-layer spans and
               cross-layer updates, delay sum(span_j - 1)

Each config freezes the parameters, knows its decision delay and its
per-symbol cost, and builds either a streaming estimator (pure Python,
bounded memory, one symbol per step) or runs a whole block through the
compiled kernels.  Both paths perform identical arithmetic in identical
order, so their outputs and counters agree exactly.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import _kernels
from .constellations import Constellation, deci_index
from .errors import ConfigError

TraceHook = Callable[[int, int, int, complex], None]
"""Called once per estimation event with (step, channel, index, value)."""


# ---------------------------------------------------------------------------
# layer-length rules


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of checking a per-layer span vector.

    ``contributions`` maps (producing_layer, receiving_layer), both
    1-based with producer > receiver, to whether the producer's fresh
    decision still falls inside the receiver's causal window and may
    therefore overwrite the receiver's copy.
    """

    ok: bool
    mode: str
    messages: tuple[str, ...]
    contributions: dict[tuple[int, int], bool]


def validate_lengths(spans: Sequence[int], mode: str = "optimal") -> ValidityReport:
    """Check a span vector against the chosen length rule.

    ``optimal`` requires span[-1-k] >= 2**(k-1) * span[-1] + 1 for
    k = 1..layers-1, which guarantees every deeper layer's decision can
    propagate into all earlier layers.  ``simplified`` requires each
    span to exceed the next by exactly one, giving adjacent-layer
    propagation only.  ``custom`` accepts anything and just reports
    which propagation relations hold.
    """
    if mode not in ("optimal", "simplified", "custom"):
        raise ConfigError(f"unknown length mode {mode!r}")
    s = [int(v) for v in spans]
    if not s:
        raise ConfigError("span vector is empty")
    if any(v < 2 for v in s):
        raise ConfigError(f"every span must be >= 2, got {s}")
    layers = len(s)
    msgs: list[str] = []
    ok = True
    if mode == "optimal":
        for k in range(1, layers):
            need = 2 ** (k - 1) * s[-1] + 1
            if s[layers - k - 1] < need:
                ok = False
                msgs.append(
                    f"layer {layers - k} span {s[layers - k - 1]} < {need} "
                    f"required to cover the {k} layer(s) after it"
                )
    elif mode == "simplified":
        for i in range(1, layers):
            if s[i - 1] != s[i] + 1:
                ok = False
                msgs.append(
                    f"layer {i} span {s[i - 1]} must exceed layer {i + 1} "
                    f"span {s[i]} by exactly one"
                )
    contributions: dict[tuple[int, int], bool] = {}
    for j in range(2, layers + 1):
        for jj in range(1, j):
            gap = sum(s[i - 1] - 1 for i in range(jj + 1, j + 1)) + 1
            held = s[jj - 1] - 1 >= gap
            contributions[(j, jj)] = held
            if mode == "custom" and not held:
                msgs.append(
                    f"decisions of layer {j} cannot reach layer {jj} "
                    f"(window {s[jj - 1] - 1} < offset {gap})"
                )
    return ValidityReport(ok=ok, mode=mode, messages=tuple(msgs), contributions=contributions)


def _update_mask(report: ValidityReport, layers: int) -> np.ndarray:
    mask = np.zeros((layers + 1, layers + 1), dtype=np.bool_)
    for (j, jj), held in report.contributions.items():
        mask[j, jj] = held
    return mask


# ---------------------------------------------------------------------------
# configs


@dataclass(frozen=True)
class SssseConfig:
    span: int

    kind = "sssse"

    def __post_init__(self) -> None:
        if self.span < 2:
            raise ConfigError(f"span must be >= 2, got {self.span}")

    @property
    def delay(self) -> int:
        return 0

    @property
    def max_span(self) -> int:
        return self.span

    def op_count(self) -> tuple[int, int]:
        """Per-symbol (multiplications, additions)."""
        c = self.span - 1
        return c, c

    def label(self) -> str:
        return f"sssse_L{self.span}"


@dataclass(frozen=True)
class SssgbkseConfig:
    span: int
    go_back: int

    kind = "sssgbkse"

    def __post_init__(self) -> None:
        if self.span < 2:
            raise ConfigError(f"span must be >= 2, got {self.span}")
        if not 0 <= self.go_back <= self.span - 1:
            raise ConfigError(
                f"go_back must lie in [0, span-1] = [0, {self.span - 1}], got {self.go_back}"
            )

    @property
    def delay(self) -> int:
        return self.go_back

    @property
    def max_span(self) -> int:
        return self.span

    def op_count(self) -> tuple[int, int]:
        k = self.go_back
        c = (k + 2) * (self.span - 1) + k * (k + 1) // 2
        return c, c

    def label(self) -> str:
        return f"sssgbkse_L{self.span}_K{self.go_back}"


@dataclass(frozen=True)
class MlisicConfig:
    span: int
    layers: int

    kind = "mlisic"

    def __post_init__(self) -> None:
        if self.span < 2:
            raise ConfigError(f"span must be >= 2, got {self.span}")
        if self.layers < 1:
            raise ConfigError(f"layers must be >= 1, got {self.layers}")

    @property
    def delay(self) -> int:
        return self.layers * (self.span - 1)

    @property
    def max_span(self) -> int:
        return self.span

    def op_count(self) -> tuple[int, int]:
        c = 2 * self.layers * (self.span - 1)
        return c, c

    def label(self) -> str:
        return f"mlisic_L{self.span}_K{self.layers}"


@dataclass(frozen=True)
class ImlisicConfig:
    spans: tuple[int, ...]
    mode: str = "optimal"
    report: ValidityReport = field(init=False, repr=False, compare=False)

    kind = "imlisic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "spans", tuple(int(v) for v in self.spans))
        rep = validate_lengths(self.spans, self.mode)
        if not rep.ok:
            raise ConfigError(
                f"span vector {self.spans} violates the {self.mode} rule: "
                + "; ".join(rep.messages)
            )
        if self.mode == "custom" and rep.messages:
            warnings.warn(
                f"span vector {self.spans}: " + "; ".join(rep.messages),
                stacklevel=3,
            )
        object.__setattr__(self, "report", rep)

    @property
    def layers(self) -> int:
        return len(self.spans)

    @property
    def delay(self) -> int:
        return sum(v - 1 for v in self.spans)

    @property
    def max_span(self) -> int:
        return max(self.spans)

    def op_count(self) -> tuple[int, int]:
        c = 2 * sum(v - 1 for v in self.spans)
        return c, c

    def update_mask(self) -> np.ndarray:
        """Boolean matrix; entry [j, jj] tells whether layer j's fresh
        decision overwrites layer jj's copy of the same symbol."""
        return _update_mask(self.report, self.layers)

    def label(self) -> str:
        return "imlisic_L" + "-".join(str(v) for v in self.spans)


EstimatorConfig = SssseConfig | SssgbkseConfig | MlisicConfig | ImlisicConfig


# ---------------------------------------------------------------------------
# streaming implementations


class _Ring:
    """Fixed-capacity ring over absolute stream indices.

    Reads outside [0, top] return 0, matching the zero-symbol padding
    on both ends of a block.  The caller guarantees its live window
    never exceeds the capacity.
    """

    __slots__ = ("buf", "cap", "top")

    def __init__(self, cap: int) -> None:
        self.cap = cap
        self.buf = [0j] * cap
        self.top = -1

    def get(self, idx: int) -> complex:
        if idx < 0 or idx > self.top:
            return 0j
        return self.buf[idx % self.cap]

    def append(self, idx: int, value: complex) -> None:
        self.buf[idx % self.cap] = value
        if idx > self.top:
            self.top = idx

    def revise(self, idx: int, value: complex) -> None:
        self.buf[idx % self.cap] = value


class _StreamBase:
    """Shared mechanics: tap/point tables, decision, counters, trace."""

    def __init__(self, cfg: EstimatorConfig, taps: np.ndarray, constellation: Constellation,
                 trace_hook: Optional[TraceHook] = None) -> None:
        taps = np.asarray(taps, dtype=np.float64)
        if taps.size < cfg.max_span:
            raise ConfigError(
                f"{cfg.label()} needs {cfg.max_span} taps, got {taps.size}"
            )
        self.cfg = cfg
        self.taps = [float(v) for v in taps]
        self.points = constellation.points
        self._pre = self.points.real.copy()
        self._pim = self.points.imag.copy()
        self.mult_count = 0
        self.add_count = 0
        self.trace_hook = trace_hook
        self._k = -1
        self._n: Optional[int] = None

    @property
    def delay(self) -> int:
        return self.cfg.delay

    def _deci(self, v: complex) -> int:
        dr = v.real - self._pre
        di = v.imag - self._pim
        return int(np.argmin(dr * dr + di * di))

    def _event(self, channel: int, idx: int, value: complex) -> None:
        if self.trace_hook is not None:
            self.trace_hook(self._k, channel, idx, value)

    def step(self, y: complex) -> Optional[complex]:
        raise NotImplementedError

    def flush(self) -> list[complex]:
        raise NotImplementedError


class SssseEstimator(_StreamBase):
    def __init__(self, cfg: SssseConfig, taps, constellation, trace_hook=None) -> None:
        super().__init__(cfg, taps, constellation, trace_hook)
        self.est = _Ring(cfg.span + 1)

    def step(self, y: complex) -> complex:
        self._k = k = self._k + 1
        span = self.cfg.span
        v = complex(y)
        for i in range(2, span + 1):
            v = v - self.taps[i - 1] * self.est.get(k - i + 1)
            self.mult_count += 1
            self.add_count += 1
        a = complex(self.points[self._deci(v)])
        self.est.append(k, a)
        self._event(0, k, a)
        return a

    def flush(self) -> list[complex]:
        return []


class SssgbkseEstimator(_StreamBase):
    def __init__(self, cfg: SssgbkseConfig, taps, constellation, trace_hook=None) -> None:
        super().__init__(cfg, taps, constellation, trace_hook)
        self.est = _Ring(cfg.span + cfg.go_back + 2)
        self.ybuf = _Ring(cfg.go_back + 2)

    def _cancel_left(self, y: complex, idx: int) -> complex:
        v = complex(y)
        for i in range(2, self.cfg.span + 1):
            v = v - self.taps[i - 1] * self.est.get(idx - i + 1)
            self.mult_count += 1
            self.add_count += 1
        return v

    def step(self, y: complex) -> Optional[complex]:
        self._k = k = self._k + 1
        y = complex(y)
        self.ybuf.append(k, y)
        a = complex(self.points[self._deci(self._cancel_left(y, k))])
        self.est.append(k, a)
        self._event(0, k, a)
        for kp in range(1, self.cfg.go_back + 1):
            j = k - kp
            if j < 0:
                break
            v = self._cancel_left(self.ybuf.get(j), j)
            for m in range(1, kp + 1):
                v = v - self.taps[m] * self.est.get(j + m)
                self.mult_count += 1
                self.add_count += 1
            a = complex(self.points[self._deci(v)])
            self.est.revise(j, a)
            self._event(kp, j, a)
        a = complex(self.points[self._deci(self._cancel_left(y, k))])
        self.est.revise(k, a)
        self._event(self.cfg.go_back + 1, k, a)
        out = k - self.cfg.go_back
        return self.est.get(out) if out >= 0 else None

    def flush(self) -> list[complex]:
        lo = max(self._k - self.cfg.go_back + 1, 0)
        return [self.est.get(i) for i in range(lo, self._k + 1)]


class MlisicEstimator(_StreamBase):
    def __init__(self, cfg: MlisicConfig, taps, constellation, trace_hook=None) -> None:
        super().__init__(cfg, taps, constellation, trace_hook)
        cap = 2 * cfg.span + cfg.delay + 2
        self.ybuf = _Ring(cap)
        self.layers = [_Ring(cap) for _ in range(cfg.layers)]

    def _limit(self) -> int:
        return self._n - 1 if self._n is not None else self._k

    def _advance(self, y: complex) -> Optional[complex]:
        self._k = k = self._k + 1
        if self._n is None:
            self.ybuf.append(k, complex(y))
        span = self.cfg.span
        limit = self._limit()
        for j in range(1, self.cfg.layers + 1):
            idx = k - j * (span - 1)
            if idx < 0 or idx > limit:
                continue
            src = self.ybuf if j == 1 else self.layers[j - 2]
            v = self.ybuf.get(idx)
            for i in range(2, span + 1):
                v = v - self.taps[i - 1] * src.get(idx - i + 1)
                self.mult_count += 1
                self.add_count += 1
            for i in range(2, span + 1):
                v = v - self.taps[i - 1] * src.get(idx + i - 1)
                self.mult_count += 1
                self.add_count += 1
            a = complex(self.points[self._deci(v)])
            self.layers[j - 1].append(idx, a)
            self._event(j, idx, a)
        out = k - self.cfg.delay
        if 0 <= out <= limit:
            return self.layers[-1].get(out)
        return None

    def step(self, y: complex) -> Optional[complex]:
        if self._n is not None:
            raise RuntimeError("step() after flush()")
        return self._advance(y)

    def flush(self) -> list[complex]:
        self._n = self._k + 1
        tail = []
        for _ in range(self.cfg.delay):
            a = self._advance(0j)
            if a is not None:
                tail.append(a)
        return tail


class ImlisicEstimator(_StreamBase):
    def __init__(self, cfg: ImlisicConfig, taps, constellation, trace_hook=None) -> None:
        super().__init__(cfg, taps, constellation, trace_hook)
        cap = 2 * cfg.max_span + cfg.delay + 2
        self.ybuf = _Ring(cap)
        self.layers = [_Ring(cap) for _ in range(cfg.layers)]
        self.cum = [0]
        for v in cfg.spans:
            self.cum.append(self.cum[-1] + v - 1)
        self.mask = cfg.update_mask()

    def _limit(self) -> int:
        return self._n - 1 if self._n is not None else self._k

    def _advance(self, y: complex) -> Optional[complex]:
        self._k = k = self._k + 1
        if self._n is None:
            self.ybuf.append(k, complex(y))
        limit = self._limit()
        for j in range(1, self.cfg.layers + 1):
            idx = k - self.cum[j]
            if idx < 0 or idx > limit:
                continue
            lj = self.cfg.spans[j - 1]
            own = self.layers[j - 1]
            right = self.ybuf if j == 1 else self.layers[j - 2]
            v = self.ybuf.get(idx)
            for i in range(2, lj + 1):
                v = v - self.taps[i - 1] * own.get(idx - i + 1)
                self.mult_count += 1
                self.add_count += 1
            for i in range(2, lj + 1):
                v = v - self.taps[i - 1] * right.get(idx + i - 1)
                self.mult_count += 1
                self.add_count += 1
            a = complex(self.points[self._deci(v)])
            own.append(idx, a)
            self._event(j, idx, a)
            for jj in range(1, j):
                if self.mask[j, jj]:
                    self.layers[jj - 1].revise(idx, a)
        out = k - self.cfg.delay
        if 0 <= out <= limit:
            return self.layers[-1].get(out)
        return None

    def step(self, y: complex) -> Optional[complex]:
        if self._n is not None:
            raise RuntimeError("step() after flush()")
        return self._advance(y)

    def flush(self) -> list[complex]:
        self._n = self._k + 1
        tail = []
        for _ in range(self.cfg.delay):
            a = self._advance(0j)
            if a is not None:
                tail.append(a)
        return tail


_STREAM_CLASSES = {
    "sssse": SssseEstimator,
    "sssgbkse": SssgbkseEstimator,
    "mlisic": MlisicEstimator,
    "imlisic": ImlisicEstimator,
}


def make_estimator(cfg: EstimatorConfig, taps, constellation: Constellation,
                   trace_hook: Optional[TraceHook] = None):
    """Build the streaming estimator for a config."""
    return _STREAM_CLASSES[cfg.kind](cfg, taps, constellation, trace_hook)


# ---------------------------------------------------------------------------
# block interface


@dataclass(frozen=True)
class BlockResult:
    indices: np.ndarray
    mults: int
    adds: int


def run_block(cfg: EstimatorConfig, taps, constellation: Constellation,
              y: np.ndarray) -> BlockResult:
    """Estimate a whole block through the compiled kernels.

    Returns one decided constellation index per received symbol, in
    symbol order, plus the operation counters accumulated over every
    estimation event the block triggered (pipeline drain included).
    """
    taps = np.ascontiguousarray(np.asarray(taps, dtype=np.float64))
    if taps.size < cfg.max_span:
        raise ConfigError(f"{cfg.label()} needs {cfg.max_span} taps, got {taps.size}")
    taps = taps[: cfg.max_span]
    y = np.ascontiguousarray(np.asarray(y, dtype=np.complex128))
    pts = constellation.points
    if cfg.kind == "sssse":
        out, m, a = _kernels.sssse_kernel(y, taps, pts)
    elif cfg.kind == "sssgbkse":
        out, m, a = _kernels.sssgbkse_kernel(y, taps, pts, cfg.go_back)
    elif cfg.kind == "mlisic":
        out, m, a = _kernels.mlisic_kernel(y, taps, pts, cfg.layers)
    else:
        spans = np.asarray(cfg.spans, dtype=np.int64)
        out, m, a = _kernels.imlisic_kernel(y, taps, pts, spans, cfg.update_mask())
    return BlockResult(indices=out, mults=int(m), adds=int(a))


def run_stream(cfg: EstimatorConfig, taps, constellation: Constellation,
               y: np.ndarray, trace_hook: Optional[TraceHook] = None) -> BlockResult:
    """Same contract as run_block, through the streaming classes."""
    est = make_estimator(cfg, taps, constellation, trace_hook)
    decided: list[complex] = []
    for v in np.asarray(y, dtype=np.complex128):
        a = est.step(complex(v))
        if a is not None:
            decided.append(a)
    decided.extend(est.flush())
    if len(decided) != len(y):
        raise AssertionError(
            f"stream emitted {len(decided)} symbols for {len(y)} inputs"
        )
    idx = deci_index(np.asarray(decided, dtype=np.complex128), constellation)
    return BlockResult(indices=idx, mults=est.mult_count, adds=est.add_count)
