"""RF beamformer construction for subconnected phase-shifter networks.

Three analog architectures are supported, all driven by the right singular
vectors of the channel:

* ``sub-ps``    - one phase shifter per antenna; chain m applies the
  conjugate phases of singular-vector column m on its own antenna block.
* ``full-switch`` - L phase shifters per chain routed anywhere inside the
  chain's block by a fully-connected switch; the L antennas with the
  largest singular-vector magnitudes are kept active.
* ``sub-switch``  - L phase shifters per chain, each routed to exactly one
  of S adjacent antennas by a 1-of-S switch; the strongest antenna of each
  group is selected.

:func:`extract_hardware_full` / :func:`extract_hardware_sub` map a
constructed beamformer onto physical phase-shifter settings and 0/1 switch
select matrices, and :class:`HardwareConfig` round-trips through a plain
text report.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SUB_PS",
    "FULL_SWITCH",
    "SUB_SWITCH",
    "BlockPartition",
    "RfBeamformer",
    "HardwareConfig",
    "subconnected_ps",
    "ps_full_switch",
    "ps_sub_switch",
    "threshold_for_ratio",
    "extract_hardware_full",
    "extract_hardware_sub",
]

SUB_PS = "sub-ps"
FULL_SWITCH = "full-switch"
SUB_SWITCH = "sub-switch"


@dataclass(frozen=True)
class BlockPartition:
    """Partition of N antennas into M disjoint per-chain blocks.

    Chain m (0-based) drives antennas [m*N/M, (m+1)*N/M).  When
    ``group_size`` S is set the block is further split into groups of S
    adjacent antennas and N = M * L * S must factor exactly.
    """

    antennas: int
    chains: int
    group_size: int | None = None

    def __post_init__(self):
        if self.chains < 1 or self.antennas < 1:
            raise ValueError("antennas and chains must be >= 1")
        if self.antennas % self.chains != 0:
            raise ValueError(
                f"antennas ({self.antennas}) not divisible by chains ({self.chains})"
            )
        if self.group_size is not None:
            if self.group_size < 1:
                raise ValueError("group_size must be >= 1")
            if self.block_size % self.group_size != 0:
                raise ValueError(
                    f"block size {self.block_size} not divisible by group size {self.group_size}"
                )

    @property
    def block_size(self) -> int:
        return self.antennas // self.chains

    def block(self, m: int) -> slice:
        """Antenna slice of chain m."""
        size = self.block_size
        return slice(m * size, (m + 1) * size)

    def groups(self, m: int) -> list[slice]:
        """Group slices of chain m (absolute antenna indices)."""
        if self.group_size is None:
            raise ValueError("partition has no group structure")
        start = m * self.block_size
        s = self.group_size
        return [slice(start + q * s, start + (q + 1) * s) for q in range(self.block_size // s)]


@dataclass(frozen=True)
class RfBeamformer:
    """N x M analog beamforming matrix with its structural metadata.

    Nonzero entries are unit modulus and confined to the owning chain's
    antenna block; ``selected`` lists, per chain, the sorted antenna indices
    that carry a phase shifter; ``gamma_rf`` is the per-stream power
    normalization trace(F F^H)/M of the matrix (N/M for sub-ps, L for the
    switched architectures); ``alpha`` is the asymptotic magnitude threshold
    implied by the shifter reduction ratio (zero when no reduction).
    """

    f_rf: np.ndarray
    architecture: str
    antennas: int
    chains: int
    shifters_per_chain: int
    group_size: int
    gamma_rf: float
    alpha: float
    selected: tuple[tuple[int, ...], ...]

    @property
    def partition(self) -> BlockPartition:
        group = self.group_size if self.architecture == SUB_SWITCH else None
        return BlockPartition(self.antennas, self.chains, group)


def _check_v(v: np.ndarray, n_chains: int) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 2:
        raise ValueError("v must be a 2-d matrix of singular vectors")
    if v.shape[1] < n_chains:
        raise ValueError(f"need at least {n_chains} singular-vector columns, got {v.shape[1]}")
    return v


def subconnected_ps(v: np.ndarray, n_chains: int) -> RfBeamformer:
    """Subconnected phase-shifter beamformer: entry (n, m) = exp(j angle(v[n, m]))
    on chain m's block, zero elsewhere.

    Applies only the phases of the singular vectors, so the construction is
    invariant to their magnitudes and equivariant to per-column phase
    rotations.
    """
    v = _check_v(v, n_chains)
    n_ant = v.shape[0]
    part = BlockPartition(n_ant, n_chains)
    f = np.zeros((n_ant, n_chains), dtype=complex)
    selected = []
    for m in range(n_chains):
        blk = part.block(m)
        f[blk, m] = np.exp(1j * np.angle(v[blk, m]))
        selected.append(tuple(range(blk.start, blk.stop)))
    return RfBeamformer(
        f_rf=f,
        architecture=SUB_PS,
        antennas=n_ant,
        chains=n_chains,
        shifters_per_chain=part.block_size,
        group_size=1,
        gamma_rf=n_ant / n_chains,
        alpha=0.0,
        selected=tuple(selected),
    )


def threshold_for_ratio(ratio: float) -> float:
    """Magnitude threshold whose Rayleigh tail probability equals ``ratio``.

    For |sqrt(N) v| Rayleigh with unit second moment, P(|v| > alpha) =
    exp(-alpha^2); inverting at tail mass M*L/N gives alpha = sqrt(-ln ratio).
    """
    if not 0.0 < ratio <= 1.0:
        raise ValueError("ratio must be in (0, 1]")
    return math.sqrt(-math.log(ratio))


def _top_indices(magnitudes: np.ndarray, count: int) -> np.ndarray:
    """Indices of the ``count`` largest values, ties going to the lowest index."""
    order = np.argsort(-magnitudes, kind="stable")
    return np.sort(order[:count])


def ps_full_switch(v: np.ndarray, n_chains: int, shifters_per_chain: int) -> RfBeamformer:
    """Subconnected phase shifters behind a fully-connected switch network.

    Within each chain's block only the L antennas with the largest
    singular-vector magnitude stay active (the finite-array realization of
    thresholding at alpha); active entries carry exp(j angle(v[n, m])).
    """
    v = _check_v(v, n_chains)
    n_ant = v.shape[0]
    part = BlockPartition(n_ant, n_chains)
    l = shifters_per_chain
    if not 1 <= l <= part.block_size:
        raise ValueError(f"shifters_per_chain must be in [1, {part.block_size}], got {l}")
    f = np.zeros((n_ant, n_chains), dtype=complex)
    selected = []
    for m in range(n_chains):
        blk = part.block(m)
        local = _top_indices(np.abs(v[blk, m]), l)
        rows = blk.start + local
        f[rows, m] = np.exp(1j * np.angle(v[rows, m]))
        selected.append(tuple(int(r) for r in rows))
    ratio = n_chains * l / n_ant
    return RfBeamformer(
        f_rf=f,
        architecture=FULL_SWITCH,
        antennas=n_ant,
        chains=n_chains,
        shifters_per_chain=l,
        group_size=1,
        gamma_rf=float(l),
        alpha=threshold_for_ratio(ratio),
        selected=tuple(selected),
    )


def ps_sub_switch(v: np.ndarray, n_chains: int, shifters_per_chain: int, group_size: int) -> RfBeamformer:
    """Subconnected phase shifters, each behind a 1-of-S switch.

    The block of every chain splits into L groups of S adjacent antennas;
    in each group the antenna with the largest singular-vector magnitude is
    connected (ties to the lowest index) and carries exp(j angle(v[n, m])).
    Requires N = M * L * S exactly.
    """
    v = _check_v(v, n_chains)
    n_ant = v.shape[0]
    if n_ant != n_chains * shifters_per_chain * group_size:
        raise ValueError(
            f"antennas ({n_ant}) != chains*shifters*group ({n_chains}*{shifters_per_chain}*{group_size})"
        )
    part = BlockPartition(n_ant, n_chains, group_size)
    f = np.zeros((n_ant, n_chains), dtype=complex)
    selected = []
    for m in range(n_chains):
        rows = []
        for grp in part.groups(m):
            local = int(np.argmax(np.abs(v[grp, m])))  # argmax takes the first maximum
            n_hat = grp.start + local
            f[n_hat, m] = np.exp(1j * np.angle(v[n_hat, m]))
            rows.append(n_hat)
        selected.append(tuple(rows))
    return RfBeamformer(
        f_rf=f,
        architecture=SUB_SWITCH,
        antennas=n_ant,
        chains=n_chains,
        shifters_per_chain=shifters_per_chain,
        group_size=group_size,
        gamma_rf=float(shifters_per_chain),
        alpha=0.0,
        selected=tuple(selected),
    )


@dataclass(frozen=True)
class HardwareConfig:
    """Physical phase-shifter and switch settings realizing an RF beamformer.

    ``phases`` is an M x L complex array of unit-modulus phase-shifter
    weights.  For the fully-connected switch network, ``select[m]`` is the
    (N/M) x L 0/1 select matrix of chain m (each column exactly one 1, each
    row at most one).  For the subconnected network, ``select[m]`` is L x S
    with one-hot rows choosing which of the S group antennas each shifter
    feeds.
    """

    architecture: str
    antennas: int
    chains: int
    shifters_per_chain: int
    group_size: int
    phases: np.ndarray
    select: np.ndarray

    def apply(self) -> np.ndarray:
        """Reconstruct the N x M RF matrix from the hardware settings."""
        n, m_chains, l = self.antennas, self.chains, self.shifters_per_chain
        f = np.zeros((n, m_chains), dtype=complex)
        block = n // m_chains
        for m in range(m_chains):
            if self.architecture == SUB_SWITCH:
                s = self.group_size
                for shifter in range(l):
                    s_hat = int(np.argmax(self.select[m, shifter]))
                    row = m * l * s + shifter * s + s_hat
                    f[row, m] = self.phases[m, shifter]
            else:
                tilde = self.select[m] @ self.phases[m]
                f[m * block : (m + 1) * block, m] = tilde
        return f

    def to_report(self) -> str:
        """Plain-text report: per chain, phases in radians (12 significant
        digits) followed by the 0/1 select grid."""
        out = io.StringIO()
        out.write("hybeam hardware report\n")
        out.write(f"architecture: {self.architecture}\n")
        out.write(f"antennas: {self.antennas}\n")
        out.write(f"chains: {self.chains}\n")
        out.write(f"shifters-per-chain: {self.shifters_per_chain}\n")
        out.write(f"group-size: {self.group_size}\n")
        for m in range(self.chains):
            angles = " ".join(f"{a:.12g}" for a in np.angle(self.phases[m]))
            out.write(f"chain {m + 1} phases (rad): {angles}\n")
            out.write(f"chain {m + 1} select:\n")
            for row in self.select[m]:
                out.write(" ".join(str(int(x)) for x in row) + "\n")
        return out.getvalue()

    @classmethod
    def from_report(cls, text: str) -> "HardwareConfig":
        """Parse a report produced by :meth:`to_report`."""
        lines = [ln.rstrip("\n") for ln in text.splitlines() if ln.strip()]
        if not lines or lines[0] != "hybeam hardware report":
            raise ValueError("not a hybeam hardware report")
        header = {}
        idx = 1
        while idx < len(lines) and not lines[idx].startswith("chain "):
            key, _, value = lines[idx].partition(":")
            header[key.strip()] = value.strip()
            idx += 1
        arch = header["architecture"]
        n = int(header["antennas"])
        chains = int(header["chains"])
        l = int(header["shifters-per-chain"])
        s = int(header["group-size"])
        select_rows = l if arch == SUB_SWITCH else n // chains
        select_cols = s if arch == SUB_SWITCH else l
        phases = np.zeros((chains, l), dtype=complex)
        select = np.zeros((chains, select_rows, select_cols), dtype=np.int64)
        for m in range(chains):
            _, _, angle_text = lines[idx].partition(":")
            phases[m] = np.exp(1j * np.array([float(t) for t in angle_text.split()]))
            idx += 2  # skip the "chain m select:" line
            for r in range(select_rows):
                select[m, r] = [int(t) for t in lines[idx].split()]
                idx += 1
        return cls(
            architecture=arch,
            antennas=n,
            chains=chains,
            shifters_per_chain=l,
            group_size=s,
            phases=phases,
            select=select,
        )


def extract_hardware_full(f: RfBeamformer) -> HardwareConfig:
    """Phase-shifter weights and fully-connected select matrices for a
    ``full-switch`` beamformer (or ``sub-ps``, its L = N/M degenerate case
    where the select matrix is the identity).

    For each chain the L nonzero block entries become the shifter weights in
    index order, and select entry (i, l) is 1 exactly when block position i
    carries shifter l.
    """
    if f.architecture not in (FULL_SWITCH, SUB_PS):
        raise ValueError(f"expected a {FULL_SWITCH} or {SUB_PS} beamformer, got {f.architecture}")
    n, chains, l = f.antennas, f.chains, f.shifters_per_chain
    block = n // chains
    part = BlockPartition(n, chains)
    phases = np.zeros((chains, l), dtype=complex)
    select = np.zeros((chains, block, l), dtype=np.int64)
    for m in range(chains):
        tilde = f.f_rf[part.block(m), m]
        nonzero = np.flatnonzero(tilde)
        if len(nonzero) != l:
            raise ValueError(
                f"chain {m}: expected {l} nonzero entries, found {len(nonzero)}"
            )
        phases[m] = tilde[nonzero]
        for shifter, pos in enumerate(nonzero):
            select[m, pos, shifter] = 1
    return HardwareConfig(
        architecture=f.architecture,
        antennas=n,
        chains=chains,
        shifters_per_chain=l,
        group_size=1,
        phases=phases,
        select=select,
    )


def extract_hardware_sub(f: RfBeamformer) -> HardwareConfig:
    """Per-shifter phase and one-hot 1-of-S select vectors for a
    ``sub-switch`` beamformer.

    Shifter l of chain m owns the S antennas of group l inside the chain's
    block; exactly one must be active.
    """
    if f.architecture != SUB_SWITCH:
        raise ValueError(f"expected a {SUB_SWITCH} beamformer, got {f.architecture}")
    n, chains, l, s = f.antennas, f.chains, f.shifters_per_chain, f.group_size
    phases = np.zeros((chains, l), dtype=complex)
    select = np.zeros((chains, l, s), dtype=np.int64)
    for m in range(chains):
        for shifter in range(l):
            start = m * l * s + shifter * s
            group = f.f_rf[start : start + s, m]
            nonzero = np.flatnonzero(group)
            if len(nonzero) != 1:
                raise ValueError(
                    f"chain {m} group {shifter}: expected exactly 1 nonzero entry, found {len(nonzero)}"
                )
            s_hat = int(nonzero[0])
            phases[m, shifter] = group[s_hat]
            select[m, shifter, s_hat] = 1
    return HardwareConfig(
        architecture=SUB_SWITCH,
        antennas=n,
        chains=chains,
        shifters_per_chain=l,
        group_size=s,
        phases=phases,
        select=select,
    )
