#!/usr/bin/env python3
"""
Build Test Corpus

Write the synthetic SDQ meshes used for property checks (grid, cylinder,
torus, d2, d6, saddle, fan) and optionally partition each one under the
corpus parameter grid, printing the resulting piece counts.
"""

import sys
import time
from pathlib import Path

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import math

from src.core.mesh.generator import gen_testmesh
from src.core.mesh.mesh_io import write_mesh
from src.core.partition.pipeline import partition_pipeline
from src.core.errors import PartitionError
from src.models.config_models import PartitionConfig, PrintConfig

CORPUS = {
    "grid_8x12": ("grid", {"rows": 8, "cols": 12, "size": 10.0}),
    "cylinder_16x6": ("cylinder", {"cols": 16, "rows": 6, "radius": 50.0, "height": 10.0}),
    "torus_16x8": ("torus", {"cols": 16, "rows": 8, "radius": 60.0, "minor_radius": 20.0}),
    "d2_disk": ("d2", {"sector": 4, "size": 10.0}),
    "d6_disk": ("d6", {"sector": 4, "size": 10.0, "amplitude": 15.0}),
    "saddle_10x10": ("saddle", {"rows": 10, "cols": 10, "size": 10.0, "amplitude": 20.0}),
    "fan_4x12": ("fan", {"rows": 4, "cols": 12, "sweep": math.pi, "inner_radius": 30.0}),
}

GAMMAS = (math.pi / 2, math.pi / 4)
BBOXES = ((500.0, 500.0, 500.0), (120.0, 120.0, 120.0))
SUPPORT_ALLOWANCE = PrintConfig().support_height


def write_corpus(out_dir: Path):
    """Step 1: Write every corpus mesh"""
    print("=" * 60)
    print("STEP 1: Write Corpus Meshes")
    print("=" * 60)

    meshes = {}
    for name, (kind, params) in CORPUS.items():
        mesh = gen_testmesh(kind, **params)
        write_mesh(mesh, out_dir / f"{name}.json")
        meshes[name] = mesh
        print(f"   ✅ {name}: {mesh.vertex_count} vertices, {mesh.quad_count} quads")
    return meshes


def partition_corpus(meshes):
    """Step 2: Partition under every gamma/bbox combination"""
    print("\n" + "=" * 60)
    print("STEP 2: Partition Corpus")
    print("=" * 60)

    failures = 0
    for name, mesh in meshes.items():
        for gamma in GAMMAS:
            for bbox in BBOXES:
                config = PartitionConfig(gamma=gamma, bbox=bbox, support_allowance=SUPPORT_ALLOWANCE)
                start = time.perf_counter()
                try:
                    result = partition_pipeline(mesh, config)
                except PartitionError as e:
                    failures += 1
                    print(f"   ❌ {name} gamma={gamma:.3f} bbox={bbox[0]:.0f}: {e}")
                    continue
                elapsed = time.perf_counter() - start
                issues = result.violations()
                mark = "✅" if not issues else "❌"
                failures += bool(issues)
                c = result.census()
                print(
                    f"   {mark} {name} gamma={gamma:.3f} bbox={bbox[0]:.0f}: "
                    f"{c['pieces_u']} U / {c['pieces_v']} V, "
                    f"{c['geometric_cuts']} geometric cuts ({elapsed:.2f}s)"
                )
                for issue in issues[:3]:
                    print(f"      - {issue}")
    return failures


def main():
    """Build the corpus and optionally check it"""
    positional = [a for a in sys.argv[1:] if not a.startswith("--")]
    out_dir = Path(positional[0]) if positional else project_root / "corpus"
    print(f"\n🏗️  Building corpus in {out_dir}\n")
    meshes = write_corpus(out_dir)
    if "--partition" in sys.argv:
        failures = partition_corpus(meshes)
        print(f"\n{'✅ All corpus runs valid' if not failures else f'❌ {failures} runs with violations'}")
        return 1 if failures else 0
    return 0


if __name__ == "__main__":
    sys.exit(main())
