"""Condition-map renderers: skeleton, depth, surface normals.

The skeleton channel draws the 23 bones as anti-aliased colored segments
with a fixed per-limb palette.  Depth and normals come from analytic
ray-capsule intersection against the posed body; depth is encoded as
clamped inverse depth z_near/z and normals as (n+1)/2 in a view frame
whose +z points toward the camera (face-on surfaces encode to blue).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from reidaug.body.camera import CameraSpec, camera_basis, project_joints
from reidaug.body.kinematics import (
    JointTree,
    PoseParams,
    forward_kinematics,
    scaled_radii,
)

# Bone (parent, child) pairs, one per non-root joint.
LIMB_PAIRS = [(int(p), j) for j, p in enumerate(
    [-1, 0, 0, 0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 9, 9, 12, 13, 14, 16, 17, 18, 19, 20, 21]
) if p >= 0]

DEFAULT_Z_NEAR = 0.5
_BACKGROUND_NORMAL = 0.5


@dataclass
class ConditionMaps:
    """Skeleton / depth / normal condition channels plus the body mask."""

    skeleton: np.ndarray   # (H, W, 3) in [0, 1]
    depth: np.ndarray      # (H, W, 1) in [0, 1]; 0 = background
    normal: np.ndarray     # (H, W, 3) encoded unit normals
    validity_mask: np.ndarray  # (H, W) bool

    @property
    def height(self) -> int:
        return self.skeleton.shape[0]

    @property
    def width(self) -> int:
        return self.skeleton.shape[1]

    def stacked(self) -> np.ndarray:
        """All channels as one (H, W, 7) array: skeleton, depth, normal."""
        return np.concatenate([self.skeleton, self.depth, self.normal], axis=2)

    @classmethod
    def zeros(cls, height: int, width: int) -> "ConditionMaps":
        return cls(
            skeleton=np.zeros((height, width, 3)),
            depth=np.zeros((height, width, 1)),
            normal=np.full((height, width, 3), _BACKGROUND_NORMAL),
            validity_mask=np.zeros((height, width), dtype=bool),
        )


def limb_palette() -> np.ndarray:
    """Fixed (23, 3) color palette, one color per bone (hue wheel)."""
    hues = np.arange(len(LIMB_PAIRS)) / len(LIMB_PAIRS)
    colors = np.empty((len(LIMB_PAIRS), 3))
    for i, h in enumerate(hues):
        colors[i] = _hsv_to_rgb(h, 1.0, 1.0)
    return colors


def _hsv_to_rgb(h: float, s: float, v: float) -> np.ndarray:
    i = int(h * 6.0) % 6
    f = h * 6.0 - int(h * 6.0)
    p, q, t = v * (1 - s), v * (1 - s * f), v * (1 - s * (1 - f))
    rgb = [(v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)][i]
    return np.array(rgb)


def render_skeleton(keypoints2d: np.ndarray, camera: CameraSpec) -> np.ndarray:
    """Draw the bone skeleton as anti-aliased colored segments, (H, W, 3).

    Line half-width is 2 px at height 128 and scales linearly with the
    render height.  Bones are composited in fixed index order, so output
    is deterministic down to the bit.
    """
    height, width = camera.height_px, camera.width_px
    half_width = 2.0 * height / 128.0
    colors = limb_palette()
    img = np.zeros((height, width, 3))

    kp = np.asarray(keypoints2d, dtype=np.float64)
    for i, (a, b) in enumerate(LIMB_PAIRS):
        p0, p1 = kp[a], kp[b]
        lo = np.minimum(p0, p1) - (half_width + 1.0)
        hi = np.maximum(p0, p1) + (half_width + 1.0)
        u0, v0 = max(0, int(np.floor(lo[0]))), max(0, int(np.floor(lo[1])))
        u1, v1 = min(width, int(np.ceil(hi[0])) + 1), min(height, int(np.ceil(hi[1])) + 1)
        if u0 >= u1 or v0 >= v1:
            continue
        ys, xs = np.mgrid[v0:v1, u0:u1]
        px = np.stack([xs + 0.5, ys + 0.5], axis=-1).reshape(-1, 2)
        seg = p1 - p0
        seg_len2 = float(seg @ seg)
        rel = px - p0
        if seg_len2 < 1e-12:
            dist = np.linalg.norm(rel, axis=1)
        else:
            t = np.clip((rel @ seg) / seg_len2, 0.0, 1.0)
            closest = p0 + t[:, None] * seg
            dist = np.linalg.norm(px - closest, axis=1)
        alpha = np.clip(half_width + 0.5 - dist, 0.0, 1.0).reshape(v1 - v0, u1 - u0, 1)
        crop = img[v0:v1, u0:u1]
        img[v0:v1, u0:u1] = crop * (1.0 - alpha) + colors[i] * alpha
    return img


@dataclass
class _Raycast:
    """Per-pixel intersection of camera rays with the posed capsule body."""

    t_hit: np.ndarray   # (N,) ray parameter, inf where missed
    part: np.ndarray    # (N,) capsule index, -1 where missed
    dirs: np.ndarray    # (N, 3) unit rays, world frame
    rot: np.ndarray     # (3, 3) world->camera rows: right, down, forward
    pos: np.ndarray     # (3,) camera position
    joints: np.ndarray  # (24, 3)
    radii: np.ndarray   # (24,)
    parents: np.ndarray

    @property
    def valid(self) -> np.ndarray:
        return np.isfinite(self.t_hit)


def _ray_capsule(
    origin: np.ndarray,
    dirs: np.ndarray,
    p0: np.ndarray,
    p1: np.ndarray,
    radius: float,
) -> np.ndarray:
    """Nearest positive ray parameter per ray for one capsule, inf if missed."""
    n = dirs.shape[0]
    t_best = np.full(n, np.inf)
    seg = p1 - p0
    seg_len = float(np.linalg.norm(seg))
    m = origin - p0

    if seg_len > 1e-9:
        axis = seg / seg_len
        d_axis = dirs @ axis
        m_axis = float(m @ axis)
        dd = dirs - d_axis[:, None] * axis
        mm = m - m_axis * axis
        a = np.einsum("ij,ij->i", dd, dd)
        b = dd @ mm
        c = float(mm @ mm) - radius * radius
        disc = b * b - a * c
        hit = (disc >= 0) & (a > 1e-12)
        sq = np.sqrt(np.maximum(disc, 0.0))
        safe_a = np.where(a > 1e-12, a, 1.0)
        for sign in (-1.0, 1.0):
            t = (-b + sign * sq) / safe_a
            s = m_axis + t * d_axis
            ok = hit & (t > 0) & (s >= 0.0) & (s <= seg_len)
            t_best = np.where(ok & (t < t_best), t, t_best)
        caps = ((p0, m_axis, -1.0), (p1, m_axis - seg_len, 1.0))
        # For cap (center, axial offset of origin rel. to cap plane, side):
        # side -1 keeps hits with axial coord <= 0, side +1 >= 0.
        for center, off, side in caps:
            oc = origin - center
            b = dirs @ oc
            c = float(oc @ oc) - radius * radius
            disc = b * b - c
            hit = disc >= 0
            sq = np.sqrt(np.maximum(disc, 0.0))
            for sign in (-1.0, 1.0):
                t = -b + sign * sq
                s = off + t * d_axis
                ok = hit & (t > 0) & (s * side >= 0.0)
                t_best = np.where(ok & (t < t_best), t, t_best)
    else:
        # Degenerate capsule: plain sphere.
        b = dirs @ m
        c = float(m @ m) - radius * radius
        disc = b * b - c
        hit = disc >= 0
        sq = np.sqrt(np.maximum(disc, 0.0))
        for sign in (-1.0, 1.0):
            t = -b + sign * sq
            ok = hit & (t > 0)
            t_best = np.where(ok & (t < t_best), t, t_best)
    return t_best


def _pixel_rays(camera: CameraSpec, target: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    rot, pos = camera_basis(camera, target)
    height, width = camera.height_px, camera.width_px
    ys, xs = np.mgrid[0:height, 0:width]
    x = (xs + 0.5 - width / 2.0) / camera.focal_px
    y = (ys + 0.5 - height / 2.0) / camera.focal_px
    d_cam = np.stack([x, y, np.ones_like(x)], axis=-1).reshape(-1, 3)
    d_cam /= np.linalg.norm(d_cam, axis=1, keepdims=True)
    return d_cam @ rot, rot, pos  # rows of rot are the camera axes


def _capsule_pixel_box(
    p0: np.ndarray, p1: np.ndarray, radius: float, camera: CameraSpec, rot: np.ndarray, pos: np.ndarray
) -> tuple[int, int, int, int] | None:
    """Conservative pixel bbox of a capsule's projection, None if full frame."""
    ends = np.stack([p0, p1]) - pos
    cam = ends @ rot.T
    z = cam[:, 2]
    if np.any(z - radius < 0.05):
        return None
    margin = camera.focal_px * radius / float(np.min(z - radius)) + 2.0
    u = camera.focal_px * cam[:, 0] / z + camera.width_px / 2.0
    v = camera.focal_px * cam[:, 1] / z + camera.height_px / 2.0
    u0 = max(0, int(np.floor(u.min() - margin)))
    u1 = min(camera.width_px, int(np.ceil(u.max() + margin)) + 1)
    v0 = max(0, int(np.floor(v.min() - margin)))
    v1 = min(camera.height_px, int(np.ceil(v.max() + margin)) + 1)
    if u0 >= u1 or v0 >= v1:
        return (0, 0, 0, 0)
    return (u0, u1, v0, v1)


def _raycast_body(tree: JointTree, pose: PoseParams, camera: CameraSpec) -> _Raycast:
    joints = forward_kinematics(tree, pose)
    radii = scaled_radii(tree, pose)
    dirs, rot, pos = _pixel_rays(camera, joints[0])
    height, width = camera.height_px, camera.width_px

    t_hit = np.full(dirs.shape[0], np.inf)
    part = np.full(dirs.shape[0], -1, dtype=np.int64)
    for j in range(tree.joint_count):
        p = int(tree.parents[j])
        p0 = joints[p] if p >= 0 else joints[j]
        box = _capsule_pixel_box(p0, joints[j], float(radii[j]), camera, rot, pos)
        if box is None:
            idx = slice(None)
        else:
            u0, u1, v0, v1 = box
            if u0 == u1:
                continue
            idx = (
                np.arange(v0, v1)[:, None] * width + np.arange(u0, u1)[None, :]
            ).reshape(-1)
        t = _ray_capsule(pos, dirs[idx], p0, joints[j], float(radii[j]))
        closer = t < t_hit[idx]
        t_hit[idx] = np.where(closer, t, t_hit[idx])
        part[idx] = np.where(closer, j, part[idx])
    return _Raycast(t_hit, part, dirs, rot, pos, joints, radii, tree.parents)


def _hit_normals(cast: _Raycast) -> np.ndarray:
    """World-frame unit normals at hit points (zeros where missed)."""
    hits = cast.pos + cast.t_hit[:, None] * cast.dirs
    normals = np.zeros_like(cast.dirs)
    for j in np.unique(cast.part[cast.part >= 0]):
        sel = cast.part == j
        p = int(cast.parents[j])
        p0 = cast.joints[p] if p >= 0 else cast.joints[j]
        seg = cast.joints[j] - p0
        seg_len2 = float(seg @ seg)
        rel = hits[sel] - p0
        if seg_len2 > 1e-12:
            s = np.clip((rel @ seg) / seg_len2, 0.0, 1.0)
            closest = p0 + s[:, None] * seg
        else:
            closest = np.broadcast_to(p0, rel.shape)
        nrm = hits[sel] - closest
        nrm /= np.maximum(np.linalg.norm(nrm, axis=1, keepdims=True), 1e-12)
        normals[sel] = nrm
    return normals


def _depth_normal_from_cast(
    cast: _Raycast, camera: CameraSpec, z_near: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    height, width = camera.height_px, camera.width_px
    valid = cast.valid

    depth = np.zeros(cast.t_hit.shape)
    z = cast.t_hit[valid] * (cast.dirs[valid] @ cast.rot[2])
    depth[valid] = np.clip(z_near / z, 0.0, 1.0)

    normal = np.full((cast.t_hit.shape[0], 3), _BACKGROUND_NORMAL)
    if valid.any():
        world_n = _hit_normals(cast)
        view = np.stack([cast.rot[0], -cast.rot[1], -cast.rot[2]])
        normal[valid] = (world_n[valid] @ view.T + 1.0) / 2.0

    return (
        depth.reshape(height, width, 1),
        normal.reshape(height, width, 3),
        valid.reshape(height, width),
    )


def render_depth_normal(
    tree: JointTree,
    pose: PoseParams,
    camera: CameraSpec,
    z_near: float = DEFAULT_Z_NEAR,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Render (depth (H,W,1), normal (H,W,3), validity (H,W)) maps.

    Depth is clamp(z_near / z, 0, 1) with z the camera-space depth along
    the optical axis; background stays 0.  Normals are encoded (n+1)/2 in
    the right/up/toward-camera view frame; background is (0.5, 0.5, 0.5).
    """
    cast = _raycast_body(tree, pose, camera)
    return _depth_normal_from_cast(cast, camera, z_near)


def render_condition_maps(
    tree: JointTree,
    pose: PoseParams,
    camera: CameraSpec,
    z_near: float = DEFAULT_Z_NEAR,
) -> ConditionMaps:
    """Render all three condition channels for one (pose, camera)."""
    joints = forward_kinematics(tree, pose)
    keypoints, _ = project_joints(joints, camera)
    skeleton = render_skeleton(keypoints, camera)
    depth, normal, valid = render_depth_normal(tree, pose, camera, z_near=z_near)
    return ConditionMaps(skeleton=skeleton, depth=depth, normal=normal, validity_mask=valid)


def _body_image_from_cast(
    cast: _Raycast, camera: CameraSpec, part_colors: np.ndarray, background: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    height, width = camera.height_px, camera.width_px
    valid = cast.valid
    img = np.tile(np.asarray(background, dtype=np.float64), (cast.t_hit.shape[0], 1))
    if valid.any():
        world_n = _hit_normals(cast)
        toward_cam = -cast.dirs[valid]
        light = toward_cam + np.array([0.0, 0.6, 0.0])
        light /= np.linalg.norm(light, axis=1, keepdims=True)
        lambert = np.maximum(0.0, np.einsum("ij,ij->i", world_n[valid], light))
        shade = 0.45 + 0.55 * lambert
        colors = np.asarray(part_colors, dtype=np.float64)[cast.part[valid]]
        img[valid] = np.clip(colors * shade[:, None], 0.0, 1.0)
    return img.reshape(height, width, 3), valid.reshape(height, width)


def render_body_image(
    tree: JointTree,
    pose: PoseParams,
    camera: CameraSpec,
    part_colors: np.ndarray,
    background: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    """Render the colored capsule body, (H, W, 3) in [0, 1] plus body mask.

    Each capsule takes its entry from ``part_colors`` (24, 3), shaded by a
    head-light plus a mild top-light so curvature and elevation leave a
    photometric trace.  Background is a solid color.
    """
    cast = _raycast_body(tree, pose, camera)
    return _body_image_from_cast(cast, camera, part_colors, background)


def render_record(
    tree: JointTree,
    pose: PoseParams,
    camera: CameraSpec,
    part_colors: np.ndarray,
    background: np.ndarray,
    z_near: float = DEFAULT_Z_NEAR,
) -> tuple[np.ndarray, ConditionMaps]:
    """Body image plus condition maps from a single shared raycast."""
    cast = _raycast_body(tree, pose, camera)
    keypoints, _ = project_joints(cast.joints, camera)
    skeleton = render_skeleton(keypoints, camera)
    depth, normal, valid = _depth_normal_from_cast(cast, camera, z_near)
    image, _ = _body_image_from_cast(cast, camera, part_colors, background)
    maps = ConditionMaps(skeleton=skeleton, depth=depth, normal=normal, validity_mask=valid)
    return image, maps
