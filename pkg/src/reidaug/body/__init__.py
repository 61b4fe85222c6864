"""Simplified capsule body on the 24-joint SMPL kinematic tree.

Provides forward kinematics, pinhole projection and the three condition-map
renderers (skeleton / depth / normal) plus the colored body render used by
the synthetic datasets.
"""

from reidaug.body.kinematics import (
    JointTree,
    PoseParams,
    default_tree,
    forward_kinematics,
    joint_world_rotations,
    scaled_offsets,
    scaled_radii,
)
from reidaug.body.camera import BehindCamera, CameraSpec, camera_basis, project_joints, world_to_camera
from reidaug.body.render import (
    ConditionMaps,
    LIMB_PAIRS,
    limb_palette,
    render_body_image,
    render_condition_maps,
    render_depth_normal,
    render_record,
    render_skeleton,
)

__all__ = [
    "JointTree",
    "PoseParams",
    "default_tree",
    "forward_kinematics",
    "joint_world_rotations",
    "scaled_offsets",
    "scaled_radii",
    "BehindCamera",
    "CameraSpec",
    "camera_basis",
    "project_joints",
    "world_to_camera",
    "ConditionMaps",
    "LIMB_PAIRS",
    "limb_palette",
    "render_body_image",
    "render_condition_maps",
    "render_depth_normal",
    "render_record",
    "render_skeleton",
]
