"""Regenerate the shipped workload files under src/hnnsim/workloads/.

Channel widths and depths follow the public architectures. Spatial sizes are
reduced so that every layer fits the 28-core peripheral ring even at a
64-neuron grouping (at most 1792 output neurons per layer); see README.
"""

import sys
from pathlib import Path

from hnnsim.workload import Conv, Dense, DepthwiseConv, LayerSpec, NetworkModel, Pool, save_workload

OUT = Path(__file__).resolve().parents[1] / "src" / "hnnsim" / "workloads"


def rwkv6l512(blocks=6, d=512, vocab=256):
    layers = []
    for b in range(blocks):
        for part in ("r", "k", "v", "o"):
            layers.append(LayerSpec(Dense(d, d), name=f"b{b}.att.{part}"))
        layers.append(LayerSpec(Dense(d, 4 * d), name=f"b{b}.ffn.k"))
        layers.append(LayerSpec(Dense(4 * d, d), name=f"b{b}.ffn.v"))
        layers.append(LayerSpec(Dense(d, d), name=f"b{b}.ffn.r"))
    layers.append(LayerSpec(Dense(d, vocab), name="head"))
    return NetworkModel("rwkv6l512", layers)


def msresnet18(classes=100):
    # (channels, feature side) per stage; stride-2 entry convs halve the side.
    stages = [(64, 5), (128, 3), (256, 2), (512, 1)]
    layers = [LayerSpec(Conv(3, 64, 3, 5, 5), name="stem")]
    c_prev = 64
    for s, (c, side) in enumerate(stages):
        for j in range(4):
            layers.append(LayerSpec(Conv(c_prev, c, 3, side, side), name=f"s{s + 1}.conv{j}"))
            c_prev = c
    layers.append(LayerSpec(Pool(c_prev, 1, 1, 1), name="avgpool"))
    layers.append(LayerSpec(Dense(c_prev, classes), name="fc"))
    return NetworkModel("msresnet18", layers)


# EfficientNet-B4 stages: (kernel, stride, out channels, repeats, expansion)
_B4_STAGES = [
    (3, 1, 24, 2, 1),
    (3, 2, 32, 4, 4),
    (5, 2, 56, 4, 4),
    (3, 2, 112, 6, 4),
    (5, 1, 160, 6, 4),
    (5, 2, 272, 8, 4),
    (3, 1, 448, 2, 4),
]


def efficientnetb4(classes=1000, side=4):
    layers = [LayerSpec(Conv(3, 48, 3, side, side), name="stem")]
    c_prev = 48
    for s, (k, stride, c_out, repeats, expand) in enumerate(_B4_STAGES):
        for r in range(repeats):
            tag = f"s{s + 1}.b{r}"
            c_mid = c_prev * expand
            if expand != 1:
                layers.append(LayerSpec(Conv(c_prev, c_mid, 1, side, side), name=f"{tag}.expand"))
            if r == 0 and stride == 2:
                side = max(1, (side + 1) // 2)
            layers.append(LayerSpec(DepthwiseConv(c_mid, k, side, side), name=f"{tag}.dw"))
            layers.append(LayerSpec(Conv(c_mid, c_out, 1, side, side), name=f"{tag}.project"))
            c_prev = c_out
    layers.append(LayerSpec(Conv(c_prev, 1792, 1, side, side), name="head"))
    layers.append(LayerSpec(Pool(1792, side, 1, 1), name="avgpool"))
    layers.append(LayerSpec(Dense(1792, classes), name="fc"))
    return NetworkModel("efficientnetb4", layers)


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    for build in (rwkv6l512, msresnet18, efficientnetb4):
        model = build()
        save_workload(model, OUT / f"{model.name}.json")
        print(f"{model.name}: {len(model.layers)} layers", file=sys.stderr)


if __name__ == "__main__":
    main()
