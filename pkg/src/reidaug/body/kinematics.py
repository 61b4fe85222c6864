"""Kinematic tree, pose parameters and forward kinematics.

The body is a 24-joint tree laid out like the SMPL skeleton so that 72-dim
axis-angle pose vectors from external files drive it directly.  Joints carry
capsule radii; the capsule for joint j spans from its parent's position to
its own (the root capsule degenerates to a sphere).

World frame: y up, person facing +z in the rest pose, units in meters.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

NUM_JOINTS = 24
NUM_SHAPE_COEFFS = 10

JOINT_NAMES = [
    "pelvis", "l_hip", "r_hip", "spine1", "l_knee", "r_knee", "spine2",
    "l_ankle", "r_ankle", "spine3", "l_foot", "r_foot", "neck", "l_collar",
    "r_collar", "head", "l_shoulder", "r_shoulder", "l_elbow", "r_elbow",
    "l_wrist", "r_wrist", "l_hand", "r_hand",
]

# SMPL parent table (root = -1).
PARENTS = np.array(
    [-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9,
     12, 13, 14, 16, 17, 18, 19, 20, 21],
    dtype=np.int64,
)

# Canonical T-pose offsets (meters, joint relative to parent). Left = +x.
_REST_OFFSETS = np.array(
    [
        [0.000, 0.000, 0.000],   # pelvis
        [0.085, -0.030, 0.000],  # l_hip
        [-0.085, -0.030, 0.000], # r_hip
        [0.000, 0.120, 0.000],   # spine1
        [0.000, -0.380, 0.000],  # l_knee
        [0.000, -0.380, 0.000],  # r_knee
        [0.000, 0.135, 0.000],   # spine2
        [0.000, -0.400, 0.000],  # l_ankle
        [0.000, -0.400, 0.000],  # r_ankle
        [0.000, 0.055, 0.000],   # spine3
        [0.000, -0.060, 0.120],  # l_foot
        [0.000, -0.060, 0.120],  # r_foot
        [0.000, 0.215, 0.000],   # neck
        [0.068, 0.150, 0.000],   # l_collar
        [-0.068, 0.150, 0.000],  # r_collar
        [0.000, 0.130, 0.000],   # head
        [0.105, 0.025, 0.000],   # l_shoulder
        [-0.105, 0.025, 0.000],  # r_shoulder
        [0.262, 0.000, 0.000],   # l_elbow
        [-0.262, 0.000, 0.000],  # r_elbow
        [0.248, 0.000, 0.000],   # l_wrist
        [-0.248, 0.000, 0.000],  # r_wrist
        [0.080, 0.000, 0.000],   # l_hand
        [-0.080, 0.000, 0.000],  # r_hand
    ],
    dtype=np.float64,
)

# Capsule radius per joint (capsule parent->joint; root = sphere).
_LIMB_RADII = np.array(
    [0.105, 0.075, 0.075, 0.110, 0.058, 0.058, 0.115, 0.048, 0.048, 0.105,
     0.040, 0.040, 0.042, 0.060, 0.060, 0.092, 0.048, 0.048, 0.040, 0.040,
     0.033, 0.033, 0.028, 0.028],
    dtype=np.float64,
)

# Shape-coefficient wiring: coefficient 0 scales every bone length
# (height), coefficient 1 scales every radius (bulk), the rest scale
# regional groups.  Values multiply around 1.0.
_TORSO = [0, 3, 6, 9, 12, 13, 14, 15]
_LEGS = [1, 2, 4, 5, 7, 8, 10, 11]
_ARMS = [16, 17, 18, 19, 20, 21, 22, 23]
_HEAD = [12, 15]
_SHOULDERS = [13, 14, 16, 17]


@dataclass(frozen=True)
class JointTree:
    """Articulated capsule body: tree topology, rest offsets and radii."""

    parents: np.ndarray
    rest_offsets: np.ndarray
    limb_radii: np.ndarray
    joint_count: int = NUM_JOINTS

    def __post_init__(self) -> None:
        if self.parents.shape != (self.joint_count,):
            raise ValueError("parents must have one entry per joint")
        if int(self.parents[0]) != -1:
            raise ValueError("joint 0 must be the root")
        if np.any(self.parents[1:] >= np.arange(1, self.joint_count)):
            raise ValueError("parents must precede children (single tree)")
        lengths = np.linalg.norm(self.rest_offsets[1:], axis=1)
        if np.any(lengths <= 0):
            raise ValueError("non-root rest offsets must have positive length")
        if np.any(self.limb_radii <= 0):
            raise ValueError("limb radii must be strictly positive")


@dataclass
class PoseParams:
    """Axis-angle joint rotations (index 0 = global root) plus shape."""

    joint_rotations: np.ndarray
    shape_coeffs: np.ndarray = field(
        default_factory=lambda: np.ones(NUM_SHAPE_COEFFS)
    )

    def __post_init__(self) -> None:
        self.joint_rotations = np.asarray(self.joint_rotations, dtype=np.float64)
        self.shape_coeffs = np.asarray(self.shape_coeffs, dtype=np.float64)
        if self.joint_rotations.shape == (NUM_JOINTS * 3,):
            self.joint_rotations = self.joint_rotations.reshape(NUM_JOINTS, 3)
        if self.joint_rotations.shape != (NUM_JOINTS, 3):
            raise ValueError("joint_rotations must be 24 axis-angle 3-vectors")
        if self.shape_coeffs.shape != (NUM_SHAPE_COEFFS,):
            raise ValueError("shape_coeffs must have 10 entries")
        if not np.all(np.isfinite(self.joint_rotations)):
            raise ValueError("axis-angle values must be finite")
        if np.any(self.shape_coeffs < 0.5) or np.any(self.shape_coeffs > 2.0):
            raise ValueError("shape_coeffs must lie in [0.5, 2.0]")

    @property
    def flat(self) -> np.ndarray:
        return self.joint_rotations.reshape(-1)

    @classmethod
    def rest(cls) -> "PoseParams":
        return cls(np.zeros((NUM_JOINTS, 3)))


def default_tree() -> JointTree:
    return JointTree(
        parents=PARENTS.copy(),
        rest_offsets=_REST_OFFSETS.copy(),
        limb_radii=_LIMB_RADII.copy(),
    )


def _length_scales(shape: np.ndarray) -> np.ndarray:
    s = np.full(NUM_JOINTS, shape[0])
    s[_TORSO] *= shape[2]
    s[_LEGS] *= shape[3]
    s[_ARMS] *= shape[4]
    s[_SHOULDERS] *= shape[9]
    return s


def _radius_scales(shape: np.ndarray) -> np.ndarray:
    s = np.full(NUM_JOINTS, shape[1])
    s[_TORSO] *= shape[5]
    s[_LEGS] *= shape[6]
    s[_ARMS] *= shape[7]
    s[_HEAD] *= shape[8]
    return s


def scaled_offsets(tree: JointTree, pose: PoseParams) -> np.ndarray:
    """Rest offsets after per-joint multiplicative length scaling, (24, 3)."""
    return tree.rest_offsets * _length_scales(pose.shape_coeffs)[:, None]


def scaled_radii(tree: JointTree, pose: PoseParams) -> np.ndarray:
    """Capsule radii after shape scaling, (24,)."""
    return tree.limb_radii * _radius_scales(pose.shape_coeffs)


def rodrigues(axis_angle: np.ndarray) -> np.ndarray:
    """Axis-angle vectors (..., 3) to rotation matrices (..., 3, 3)."""
    aa = np.asarray(axis_angle, dtype=np.float64)
    theta = np.linalg.norm(aa, axis=-1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        axis = np.where(theta > 1e-12, aa / np.maximum(theta, 1e-12), 0.0)
    x, y, z = axis[..., 0], axis[..., 1], axis[..., 2]
    zeros = np.zeros_like(x)
    k = np.stack(
        [
            np.stack([zeros, -z, y], axis=-1),
            np.stack([z, zeros, -x], axis=-1),
            np.stack([-y, x, zeros], axis=-1),
        ],
        axis=-2,
    )
    theta = theta[..., None]
    eye = np.broadcast_to(np.eye(3), k.shape)
    return eye + np.sin(theta) * k + (1.0 - np.cos(theta)) * (k @ k)


def joint_world_rotations(tree: JointTree, pose: PoseParams) -> np.ndarray:
    """Cumulative world rotation per joint, (24, 3, 3)."""
    local = rodrigues(pose.joint_rotations)
    world = np.empty_like(local)
    world[0] = local[0]
    for j in range(1, tree.joint_count):
        world[j] = world[tree.parents[j]] @ local[j]
    return world


def forward_kinematics(tree: JointTree, pose: PoseParams) -> np.ndarray:
    """World joint positions, (24, 3).

    Each joint sits at its parent's position plus the parent's cumulative
    rotation applied to the shape-scaled rest offset; the root sits at the
    origin oriented by its own rotation.
    """
    offsets = scaled_offsets(tree, pose)
    world_rot = joint_world_rotations(tree, pose)
    positions = np.zeros((tree.joint_count, 3))
    for j in range(1, tree.joint_count):
        p = tree.parents[j]
        positions[j] = positions[p] + world_rot[p] @ offsets[j]
    return positions
