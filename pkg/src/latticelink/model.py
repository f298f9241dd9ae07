"""Position-free transformer encoder with analytic backpropagation.

The encoder is a standard post-layer-norm BERT stack with one deliberate
change: the input embedding is the sum of token and segment embeddings only,
with no position term, because the encoded sets are unordered. Since token
order carries no information, the encoder internally canonicalizes each
sequence (payload tokens sorted by id within their segment run, specials
pinned) before computing, and restores the caller's order on output. That
makes the hidden states bitwise independent of how callers happen to order
set members.

Four output heads share the encoder: masked-token prediction (softmax over
the vocabulary), neighbor-pair classification (tanh pooler on [CLS] plus a
logistic unit), and the two link-prediction heads
``sigmoid(relu(h_cls @ W_cls) @ w)`` for object groups and
``sigmoid(relu(concat(h1, h2) @ W_cls) @ w)`` for the twin-tower pair model.

All gradients are computed analytically; the test suite checks every
parameter tensor against central finite differences at float64.
"""

from __future__ import annotations

import io
import json
import math
import struct
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .tokens import NO_LABEL, SEP, TokenBatch

CHECKPOINT_MAGIC = b"LLCK"
CHECKPOINT_VERSION = 1
LN_EPS = 1e-12
_GELU_C = 0.044715


@dataclass(frozen=True)
class EncoderConfig:
    d_model: int = 64
    n_layers: int = 2
    n_heads: int = 4
    d_ff: int = 256
    vocab_size: int = 8
    max_len: int = 32
    dropout: float = 0.1
    seed: int = 0

    def __post_init__(self):
        for name in ("d_model", "n_layers", "n_heads", "d_ff", "vocab_size", "max_len"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")
        if self.d_model % self.n_heads:
            raise ValueError("d_model must be divisible by n_heads")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "EncoderConfig":
        return cls(**d)


def init_params(config: EncoderConfig, dtype=np.float32) -> dict[str, np.ndarray]:
    """Seeded scaled-normal initialization for every encoder and head tensor."""
    rng = np.random.default_rng(config.seed)
    d, f, v = config.d_model, config.d_ff, config.vocab_size

    def normal(*shape):
        return (rng.standard_normal(shape) * 0.02).astype(dtype)

    p: dict[str, np.ndarray] = {
        "tok_emb": normal(v, d),
        "seg_emb": normal(2, d),
        "emb_ln_g": np.ones(d, dtype=dtype),
        "emb_ln_b": np.zeros(d, dtype=dtype),
    }
    for i in range(config.n_layers):
        L = f"L{i}."
        for proj in ("wq", "wk", "wv", "wo"):
            p[L + "attn_" + proj] = normal(d, d)
            p[L + "attn_b" + proj[-1]] = np.zeros(d, dtype=dtype)
        p[L + "ln1_g"] = np.ones(d, dtype=dtype)
        p[L + "ln1_b"] = np.zeros(d, dtype=dtype)
        p[L + "ffn_w1"] = normal(d, f)
        p[L + "ffn_b1"] = np.zeros(f, dtype=dtype)
        p[L + "ffn_w2"] = normal(f, d)
        p[L + "ffn_b2"] = np.zeros(d, dtype=dtype)
        p[L + "ln2_g"] = np.ones(d, dtype=dtype)
        p[L + "ln2_b"] = np.zeros(d, dtype=dtype)
    # heads
    p["mtp_w"] = normal(d, v)
    p["mtp_b"] = np.zeros(v, dtype=dtype)
    p["ncp_pool_w"] = normal(d, d)
    p["ncp_pool_b"] = np.zeros(d, dtype=dtype)
    p["ncp_w"] = normal(d)
    p["ncp_b"] = np.zeros(1, dtype=dtype)
    p["oo_wcls"] = normal(d, d)
    p["oo_w"] = normal(d)
    p["oa_wcls"] = normal(2 * d, d)
    p["oa_w"] = normal(d)
    return p


def zero_grads_like(params: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    return {k: np.zeros_like(v) for k, v in params.items()}


def canonical_order(ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Per-sequence permutation sorting payload tokens by id within runs.

    Structural tokens ([PAD], [CLS], [SEP]) keep their exact positions;
    each run of payload tokens between them is sorted ascending by token id
    (stable, so duplicates keep relative order). Returns (perm, inv) index
    arrays of the batch shape.
    """
    b, t = ids.shape
    structural = ids <= SEP
    group = np.cumsum(structural, axis=1)
    payload = (~structural).astype(np.int8)
    pos = np.broadcast_to(np.arange(t), (b, t))
    rows = np.broadcast_to(np.arange(b)[:, None], (b, t))
    sort_id = np.where(structural, 0, ids)
    flat = np.lexsort(
        (pos.ravel(), sort_id.ravel(), payload.ravel(), group.ravel(), rows.ravel())
    )
    perm = flat.reshape(b, t) - np.arange(b)[:, None] * t
    inv = np.argsort(perm, axis=1, kind="stable")
    return perm, inv


def _layer_norm(x: np.ndarray, g: np.ndarray, b: np.ndarray):
    mu = x.mean(axis=-1, keepdims=True)
    xc = x - mu
    var = (xc * xc).mean(axis=-1, keepdims=True)
    inv = 1.0 / np.sqrt(var + LN_EPS)
    xhat = xc * inv
    return g * xhat + b, (xhat, inv, g)


def _layer_norm_bwd(dy: np.ndarray, cache) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    xhat, inv, g = cache
    d = xhat.shape[-1]
    dg = (dy * xhat).sum(axis=tuple(range(dy.ndim - 1)))
    db = dy.sum(axis=tuple(range(dy.ndim - 1)))
    dxhat = dy * g
    dx = inv / d * (d * dxhat - dxhat.sum(-1, keepdims=True) - xhat * (dxhat * xhat).sum(-1, keepdims=True))
    return dx, dg, db


def _gelu(x: np.ndarray):
    a = math.sqrt(2.0 / math.pi)
    u = a * (x + _GELU_C * x * x * x)
    t = np.tanh(u)
    y = 0.5 * x * (1.0 + t)
    return y, (x, t)


def _gelu_bwd(dy: np.ndarray, cache) -> np.ndarray:
    x, t = cache
    a = math.sqrt(2.0 / math.pi)
    du = a * (1.0 + 3.0 * _GELU_C * x * x)
    return dy * (0.5 * (1.0 + t) + 0.5 * x * (1.0 - t * t) * du)


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def _bce_from_logits(logits: np.ndarray, labels: np.ndarray):
    """Mean binary cross-entropy; returns (loss, dlogits, probabilities)."""
    y = labels.astype(logits.dtype)
    p = _sigmoid(logits)
    loss = float(np.mean(np.maximum(logits, 0) - logits * y + np.log1p(np.exp(-np.abs(logits)))))
    dlogits = (p - y) / logits.size
    return loss, dlogits, p


class Model:
    """One encoder (plus its heads) with an owned parameter store."""

    def __init__(self, config: EncoderConfig, dtype=np.float32,
                 params: Optional[dict[str, np.ndarray]] = None):
        self.config = config
        self.dtype = np.dtype(dtype)
        self.params = params if params is not None else init_params(config, dtype)

    # ------------------------------------------------------------------ forward

    def forward(self, batch: TokenBatch, train: bool = False,
                rng: Optional[np.random.Generator] = None):
        """Hidden states (batch, width, d_model) in the caller's token order.

        ``train`` enables dropout, which then requires ``rng``. The returned
        cache drives :meth:`backward`.
        """
        cfg = self.config
        p = self.params
        if batch.ids.max() >= cfg.vocab_size:
            raise ValueError("token id out of vocabulary range")
        if train and cfg.dropout > 0 and rng is None:
            raise ValueError("training forward needs an rng for dropout")

        perm, inv = canonical_order(batch.ids)
        ids = np.take_along_axis(batch.ids, perm, axis=1)
        segs = np.take_along_axis(batch.segments, perm, axis=1)
        amask = np.take_along_axis(batch.attention_mask, perm, axis=1)

        b, t = ids.shape
        h = cfg.n_heads
        dk = cfg.d_model // h
        keep = 1.0 - cfg.dropout
        drop_masks = []

        def dropout(x):
            if not train or cfg.dropout == 0:
                drop_masks.append(None)
                return x
            draw_dtype = np.float32 if x.dtype == np.float32 else np.float64
            m = (rng.random(x.shape, dtype=draw_dtype) < keep).astype(x.dtype)
            drop_masks.append(m)
            return x * m / keep

        emb = p["tok_emb"][ids] + p["seg_emb"][segs]
        x, emb_ln_cache = _layer_norm(emb, p["emb_ln_g"], p["emb_ln_b"])
        x = dropout(x)

        # additive bias hiding masked keys from every query
        neg = np.asarray(-1e9, dtype=self.dtype)
        key_bias = np.where(amask[:, None, None, :] > 0, self.dtype.type(0), neg)

        layer_caches = []
        for i in range(cfg.n_layers):
            L = f"L{i}."
            x_in = x
            q = x @ p[L + "attn_wq"] + p[L + "attn_bq"]
            k = x @ p[L + "attn_wk"] + p[L + "attn_bk"]
            v = x @ p[L + "attn_wv"] + p[L + "attn_bv"]
            qh = q.reshape(b, t, h, dk).transpose(0, 2, 1, 3)
            kh = k.reshape(b, t, h, dk).transpose(0, 2, 1, 3)
            vh = v.reshape(b, t, h, dk).transpose(0, 2, 1, 3)
            scale = 1.0 / math.sqrt(dk)
            scores = qh @ kh.transpose(0, 1, 3, 2) * scale + key_bias
            scores -= scores.max(axis=-1, keepdims=True)
            e = np.exp(scores)
            attn = e / e.sum(axis=-1, keepdims=True)
            ctx = attn @ vh
            merged = ctx.transpose(0, 2, 1, 3).reshape(b, t, cfg.d_model)
            out = merged @ p[L + "attn_wo"] + p[L + "attn_bo"]
            out = dropout(out)
            x1, ln1_cache = _layer_norm(x_in + out, p[L + "ln1_g"], p[L + "ln1_b"])
            f1 = x1 @ p[L + "ffn_w1"] + p[L + "ffn_b1"]
            g1, gelu_cache = _gelu(f1)
            f2 = g1 @ p[L + "ffn_w2"] + p[L + "ffn_b2"]
            f2 = dropout(f2)
            x2, ln2_cache = _layer_norm(x1 + f2, p[L + "ln2_g"], p[L + "ln2_b"])
            layer_caches.append(
                dict(x_in=x_in, qh=qh, kh=kh, vh=vh, attn=attn, merged=merged,
                     ln1=ln1_cache, x1=x1, gelu=gelu_cache, g1=g1, ln2=ln2_cache)
            )
            x = x2

        hidden = np.take_along_axis(x, inv[:, :, None], axis=1)
        cache = dict(perm=perm, inv=inv, ids=ids, segs=segs,
                     emb_ln=emb_ln_cache, layers=layer_caches,
                     drop_masks=drop_masks, train=train, shape=(b, t))
        return hidden, cache

    # ----------------------------------------------------------------- backward

    def backward(self, cache: dict, d_hidden: np.ndarray) -> dict[str, np.ndarray]:
        """Parameter gradients for a loss whose hidden-state gradient is given.

        ``d_hidden`` is in the caller's token order, like the forward output.
        Returns a dict matching ``self.params`` (encoder tensors only; head
        gradients come from the head functions).
        """
        cfg = self.config
        p = self.params
        b, t = cache["shape"]
        h = cfg.n_heads
        dk = cfg.d_model // h
        keep = 1.0 - cfg.dropout
        grads: dict[str, np.ndarray] = {}

        drop_masks = cache["drop_masks"]

        def dropout_bwd(dx, idx):
            m = drop_masks[idx]
            return dx if m is None else dx * m / keep

        dx = np.take_along_axis(d_hidden, cache["perm"][:, :, None], axis=1)

        n_drop = len(drop_masks)
        for i in reversed(range(cfg.n_layers)):
            L = f"L{i}."
            c = cache["layers"][i]
            # dropout slots per layer: attn-out, ffn-out (embedding slot is 0)
            ffn_drop = 1 + 2 * i + 1
            attn_drop = 1 + 2 * i
            assert ffn_drop < n_drop

            dres2, dg2, db2 = _layer_norm_bwd(dx, c["ln2"])
            grads[L + "ln2_g"] = dg2
            grads[L + "ln2_b"] = db2
            dx1 = dres2
            df2 = dropout_bwd(dres2, ffn_drop)
            grads[L + "ffn_w2"] = c["g1"].reshape(-1, cfg.d_ff).T @ df2.reshape(-1, cfg.d_model)
            grads[L + "ffn_b2"] = df2.sum(axis=(0, 1))
            dg1 = df2 @ p[L + "ffn_w2"].T
            df1 = _gelu_bwd(dg1, c["gelu"])
            grads[L + "ffn_w1"] = c["x1"].reshape(-1, cfg.d_model).T @ df1.reshape(-1, cfg.d_ff)
            grads[L + "ffn_b1"] = df1.sum(axis=(0, 1))
            dx1 = dx1 + df1 @ p[L + "ffn_w1"].T

            dres1, dg1n, db1n = _layer_norm_bwd(dx1, c["ln1"])
            grads[L + "ln1_g"] = dg1n
            grads[L + "ln1_b"] = db1n
            dx_in = dres1
            dout = dropout_bwd(dres1, attn_drop)
            grads[L + "attn_wo"] = c["merged"].reshape(-1, cfg.d_model).T @ dout.reshape(-1, cfg.d_model)
            grads[L + "attn_bo"] = dout.sum(axis=(0, 1))
            dmerged = dout @ p[L + "attn_wo"].T
            dctx = dmerged.reshape(b, t, h, dk).transpose(0, 2, 1, 3)
            attn = c["attn"]
            dattn = dctx @ c["vh"].transpose(0, 1, 3, 2)
            dvh = attn.transpose(0, 1, 3, 2) @ dctx
            dscores = attn * (dattn - (dattn * attn).sum(axis=-1, keepdims=True))
            scale = 1.0 / math.sqrt(dk)
            dqh = dscores @ c["kh"] * scale
            dkh = dscores.transpose(0, 1, 3, 2) @ c["qh"] * scale
            dq = dqh.transpose(0, 2, 1, 3).reshape(b, t, cfg.d_model)
            dk_ = dkh.transpose(0, 2, 1, 3).reshape(b, t, cfg.d_model)
            dv = dvh.transpose(0, 2, 1, 3).reshape(b, t, cfg.d_model)
            x_in_flat = c["x_in"].reshape(-1, cfg.d_model)
            grads[L + "attn_wq"] = x_in_flat.T @ dq.reshape(-1, cfg.d_model)
            grads[L + "attn_bq"] = dq.sum(axis=(0, 1))
            grads[L + "attn_wk"] = x_in_flat.T @ dk_.reshape(-1, cfg.d_model)
            grads[L + "attn_bk"] = dk_.sum(axis=(0, 1))
            grads[L + "attn_wv"] = x_in_flat.T @ dv.reshape(-1, cfg.d_model)
            grads[L + "attn_bv"] = dv.sum(axis=(0, 1))
            dx_in = dx_in + dq @ p[L + "attn_wq"].T + dk_ @ p[L + "attn_wk"].T + dv @ p[L + "attn_wv"].T
            dx = dx_in

        dx = dropout_bwd(dx, 0)
        demb, dgE, dbE = _layer_norm_bwd(dx, cache["emb_ln"])
        grads["emb_ln_g"] = dgE
        grads["emb_ln_b"] = dbE
        grads["tok_emb"] = np.zeros_like(p["tok_emb"])
        np.add.at(grads["tok_emb"], cache["ids"], demb)
        grads["seg_emb"] = np.zeros_like(p["seg_emb"])
        np.add.at(grads["seg_emb"], cache["segs"], demb)
        return grads

    # -------------------------------------------------------------------- heads

    def mtp_head(self, hidden: np.ndarray, batch: TokenBatch):
        """Masked-token cross-entropy over the selected positions.

        Returns (loss, d_hidden, head_grads). A batch with nothing selected
        yields loss 0 and zero gradients.
        """
        p = self.params
        sel = batch.mtp_labels != NO_LABEL
        d_hidden = np.zeros_like(hidden)
        if not sel.any():
            return 0.0, d_hidden, {"mtp_w": np.zeros_like(p["mtp_w"]),
                                   "mtp_b": np.zeros_like(p["mtp_b"])}
        hs = hidden[sel]
        labels = batch.mtp_labels[sel]
        logits = hs @ p["mtp_w"] + p["mtp_b"]
        logits -= logits.max(axis=-1, keepdims=True)
        e = np.exp(logits)
        probs = e / e.sum(axis=-1, keepdims=True)
        n = hs.shape[0]
        loss = float(-np.mean(np.log(probs[np.arange(n), labels])))
        dlogits = probs.copy()
        dlogits[np.arange(n), labels] -= 1.0
        dlogits /= n
        d_hidden[sel] = dlogits @ p["mtp_w"].T
        head_grads = {"mtp_w": hs.T @ dlogits, "mtp_b": dlogits.sum(axis=0)}
        return loss, d_hidden, head_grads

    def ncp_head(self, hidden: np.ndarray, labels: Optional[np.ndarray] = None):
        """Neighbor-pair probability from the [CLS] state (tanh pooler).

        Without labels returns probabilities only; with labels returns
        (loss, probabilities, d_hidden, head_grads).
        """
        p = self.params
        hcls = hidden[:, 0, :]
        pooled_pre = hcls @ p["ncp_pool_w"] + p["ncp_pool_b"]
        pooled = np.tanh(pooled_pre)
        logits = pooled @ p["ncp_w"] + p["ncp_b"][0]
        if labels is None:
            return _sigmoid(logits)
        loss, dlogits, probs = _bce_from_logits(logits, labels)
        dpooled = dlogits[:, None] * p["ncp_w"][None, :]
        dpre = dpooled * (1.0 - pooled * pooled)
        d_hidden = np.zeros_like(hidden)
        d_hidden[:, 0, :] = dpre @ p["ncp_pool_w"].T
        head_grads = {
            "ncp_pool_w": hcls.T @ dpre,
            "ncp_pool_b": dpre.sum(axis=0),
            "ncp_w": pooled.T @ dlogits,
            "ncp_b": np.array([dlogits.sum()], dtype=hidden.dtype),
        }
        return loss, probs, d_hidden, head_grads

    def oo_head(self, hidden: np.ndarray, labels: Optional[np.ndarray] = None):
        """Group-link probability: sigmoid(relu(h_cls @ W_cls) @ w)."""
        p = self.params
        hcls = hidden[:, 0, :]
        z_pre = hcls @ p["oo_wcls"]
        z = np.maximum(z_pre, 0)
        logits = z @ p["oo_w"]
        if labels is None:
            return _sigmoid(logits)
        loss, dlogits, probs = _bce_from_logits(logits, labels)
        dz = dlogits[:, None] * p["oo_w"][None, :]
        dz_pre = dz * (z_pre > 0)
        d_hidden = np.zeros_like(hidden)
        d_hidden[:, 0, :] = dz_pre @ p["oo_wcls"].T
        head_grads = {"oo_wcls": hcls.T @ dz_pre, "oo_w": z.T @ dlogits}
        return loss, probs, d_hidden, head_grads

    def oa_head(self, hidden1: np.ndarray, hidden2: np.ndarray,
                labels: Optional[np.ndarray] = None):
        """Pair-link probability from two towers' [CLS] states, concatenated.

        The head weights live in this model's parameter store; ``hidden2``
        comes from the other tower. Returns probabilities, or with labels
        (loss, probs, d_hidden1, d_hidden2, head_grads).
        """
        p = self.params
        h1 = hidden1[:, 0, :]
        h2 = hidden2[:, 0, :]
        cat = np.concatenate([h1, h2], axis=1)
        z_pre = cat @ p["oa_wcls"]
        z = np.maximum(z_pre, 0)
        logits = z @ p["oa_w"]
        if labels is None:
            return _sigmoid(logits)
        loss, dlogits, probs = _bce_from_logits(logits, labels)
        dz = dlogits[:, None] * p["oa_w"][None, :]
        dz_pre = dz * (z_pre > 0)
        dcat = dz_pre @ p["oa_wcls"].T
        d = self.config.d_model
        d_hidden1 = np.zeros_like(hidden1)
        d_hidden2 = np.zeros_like(hidden2)
        d_hidden1[:, 0, :] = dcat[:, :d]
        d_hidden2[:, 0, :] = dcat[:, d:]
        head_grads = {"oa_wcls": cat.T @ dz_pre, "oa_w": z.T @ dlogits}
        return loss, probs, d_hidden1, d_hidden2, head_grads


# --------------------------------------------------------------------- losses


def mtp_loss(model: Model, batch: TokenBatch):
    """Forward + masked-token loss; returns (loss, grads over all params)."""
    hidden, cache = model.forward(batch)
    loss, d_hidden, head_grads = model.mtp_head(hidden, batch)
    grads = zero_grads_like(model.params)
    if (batch.mtp_labels != NO_LABEL).any():
        grads.update(model.backward(cache, d_hidden))
    grads.update(head_grads)
    return loss, grads


def ncp_loss(model: Model, batch: TokenBatch, labels: np.ndarray):
    """Forward + neighbor-pair loss; returns (loss, grads over all params)."""
    hidden, cache = model.forward(batch)
    loss, _, d_hidden, head_grads = model.ncp_head(hidden, labels)
    grads = zero_grads_like(model.params)
    grads.update(model.backward(cache, d_hidden))
    grads.update(head_grads)
    return loss, grads


def joint_pretrain_loss(model: Model, batch: TokenBatch, ncp_labels: np.ndarray,
                        train: bool = False, rng: Optional[np.random.Generator] = None):
    """Sum of the two pre-training losses from one shared forward pass.

    Returns (mtp_loss, ncp_loss, grads); the two tasks are trained together,
    so the hidden-state gradients are added before the encoder backward.
    """
    hidden, cache = model.forward(batch, train=train, rng=rng)
    l_mtp, dh1, g_mtp = model.mtp_head(hidden, batch)
    l_ncp, _, dh2, g_ncp = model.ncp_head(hidden, ncp_labels)
    grads = zero_grads_like(model.params)
    grads.update(model.backward(cache, dh1 + dh2))
    grads.update(g_mtp)
    grads.update(g_ncp)
    return l_mtp, l_ncp, grads


def oo_loss(model: Model, batch: TokenBatch, labels: np.ndarray,
            train: bool = False, rng: Optional[np.random.Generator] = None):
    hidden, cache = model.forward(batch, train=train, rng=rng)
    loss, probs, d_hidden, head_grads = model.oo_head(hidden, labels)
    grads = zero_grads_like(model.params)
    grads.update(model.backward(cache, d_hidden))
    grads.update(head_grads)
    return loss, probs, grads


def oa_loss(model_obj: Model, model_attr: Model, batch_obj: TokenBatch,
            batch_attr: TokenBatch, labels: np.ndarray, train: bool = False,
            rng: Optional[np.random.Generator] = None):
    """Twin-tower loss; the pair head lives in the object tower's params.

    Returns (loss, probs, grads_obj, grads_attr).
    """
    h1, cache1 = model_obj.forward(batch_obj, train=train, rng=rng)
    h2, cache2 = model_attr.forward(batch_attr, train=train, rng=rng)
    loss, probs, dh1, dh2, head_grads = model_obj.oa_head(h1, h2, labels)
    grads_obj = zero_grads_like(model_obj.params)
    grads_obj.update(model_obj.backward(cache1, dh1))
    grads_obj.update(head_grads)
    grads_attr = zero_grads_like(model_attr.params)
    grads_attr.update(model_attr.backward(cache2, dh2))
    return loss, probs, grads_obj, grads_attr


# ------------------------------------------------------------------ optimizer


class Adam:
    """Gradient descent with per-parameter moment estimates (bias-corrected)."""

    def __init__(self, params: dict[str, np.ndarray], lr: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        b1c = 1.0 - self.beta1 ** self.t
        b2c = 1.0 - self.beta2 ** self.t
        for k, g in grads.items():
            m = self.m[k]
            v = self.v[k]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            params[k] -= self.lr * (m / b1c) / (np.sqrt(v / b2c) + self.eps)


# ----------------------------------------------------------------- checkpoint


def save_checkpoint(path: str | Path, model: Model, extra_meta: Optional[dict] = None) -> None:
    """Magic + version + JSON header, then named float32 tensors (LE)."""
    names = sorted(model.params)
    header = {
        "config": model.config.to_dict(),
        "tensors": [{"name": n, "shape": list(model.params[n].shape)} for n in names],
    }
    if extra_meta:
        header["meta"] = extra_meta
    header_bytes = json.dumps(header, sort_keys=True).encode("utf-8")
    buf = io.BytesIO()
    buf.write(CHECKPOINT_MAGIC)
    buf.write(struct.pack("<I", CHECKPOINT_VERSION))
    buf.write(struct.pack("<I", len(header_bytes)))
    buf.write(header_bytes)
    for n in names:
        buf.write(np.ascontiguousarray(model.params[n], dtype="<f4").tobytes())
    Path(path).write_bytes(buf.getvalue())


def load_checkpoint(path: str | Path) -> tuple[Model, dict]:
    """Read a checkpoint back bit-exactly; returns (model, meta dict)."""
    raw = Path(path).read_bytes()
    if raw[:4] != CHECKPOINT_MAGIC:
        raise ValueError("not a checkpoint file (bad magic)")
    version = struct.unpack("<I", raw[4:8])[0]
    if version != CHECKPOINT_VERSION:
        raise ValueError(f"unsupported checkpoint version {version}")
    hlen = struct.unpack("<I", raw[8:12])[0]
    header = json.loads(raw[12 : 12 + hlen].decode("utf-8"))
    config = EncoderConfig.from_dict(header["config"])
    params: dict[str, np.ndarray] = {}
    off = 12 + hlen
    for spec in header["tensors"]:
        shape = tuple(spec["shape"])
        count = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(raw, dtype="<f4", count=count, offset=off).reshape(shape)
        params[spec["name"]] = arr.astype(np.float32).copy()
        off += count * 4
    model = Model(config, dtype=np.float32, params=params)
    return model, header.get("meta", {})
