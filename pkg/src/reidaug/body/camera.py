"""Look-at pinhole camera over the body root.

Convention: the camera orbits the root joint on a sphere parametrized by
(elevation, azimuth, distance).  Elevation 0 is horizontal, positive puts
the camera above the subject; azimuth 0 faces the rest-pose body front
(+z), increasing counter-clockwise seen from above.  Camera frame follows
OpenCV: +x right, +y down, +z forward, so u = f*x/z + W/2, v = f*y/z + H/2.
Roll is fixed at 0 (world-up reference).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

WORLD_UP = np.array([0.0, 1.0, 0.0])


class BehindCamera(ValueError):
    """A joint fell on or behind the camera plane."""


@dataclass(frozen=True)
class CameraSpec:
    elevation_deg: float
    azimuth_deg: float
    distance_m: float = 2.5
    focal_px: float = 100.0
    width_px: int = 64
    height_px: int = 128

    def __post_init__(self) -> None:
        if not 0.0 <= self.elevation_deg < 90.0:
            raise ValueError("elevation must be in [0, 90)")
        if not 0.0 <= self.azimuth_deg < 360.0:
            raise ValueError("azimuth must be in [0, 360)")
        if self.distance_m <= 0 or self.focal_px <= 0:
            raise ValueError("distance and focal must be positive")
        if self.width_px <= 0 or self.height_px <= 0:
            raise ValueError("image size must be positive")

    def position(self, target: np.ndarray) -> np.ndarray:
        elev = np.deg2rad(self.elevation_deg)
        azim = np.deg2rad(self.azimuth_deg)
        horizontal = np.array([np.sin(azim), 0.0, np.cos(azim)])
        offset = np.cos(elev) * horizontal + np.sin(elev) * WORLD_UP
        return np.asarray(target, dtype=np.float64) + self.distance_m * offset


def camera_basis(camera: CameraSpec, target: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """World-to-camera rotation (rows = right, down, forward) and position."""
    pos = camera.position(target)
    forward = np.asarray(target, dtype=np.float64) - pos
    forward = forward / np.linalg.norm(forward)
    right = np.cross(forward, WORLD_UP)
    norm = np.linalg.norm(right)
    if norm < 1e-9:
        # Looking straight down; pick a stable right vector.
        right = np.array([1.0, 0.0, 0.0])
    else:
        right = right / norm
    down = np.cross(forward, right)
    rot = np.stack([right, down, forward])
    return rot, pos


def world_to_camera(points: np.ndarray, camera: CameraSpec, target: np.ndarray) -> np.ndarray:
    rot, pos = camera_basis(camera, target)
    return (np.asarray(points, dtype=np.float64) - pos) @ rot.T


def project_joints(
    joints: np.ndarray, camera: CameraSpec, target: np.ndarray | None = None
) -> tuple[np.ndarray, np.ndarray]:
    """Project world joints to pixels.

    Returns (keypoints (24, 2) in pixel coordinates, depths (24,) in meters
    along the optical axis).  The camera looks at ``target`` (defaults to
    the root joint, joints[0]).

    Raises:
        BehindCamera: if any joint has camera-space depth <= 0.
    """
    joints = np.asarray(joints, dtype=np.float64)
    if target is None:
        target = joints[0]
    cam_pts = world_to_camera(joints, camera, target)
    depth = cam_pts[:, 2]
    if np.any(depth <= 0):
        bad = np.nonzero(depth <= 0)[0].tolist()
        raise BehindCamera(f"joints at or behind the camera plane: {bad}")
    u = camera.focal_px * cam_pts[:, 0] / depth + camera.width_px / 2.0
    v = camera.focal_px * cam_pts[:, 1] / depth + camera.height_px / 2.0
    return np.stack([u, v], axis=1), depth
