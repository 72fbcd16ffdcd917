import shlex
import subprocess
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from tqdm import tqdm

from config import Config
from brownian_motion.motion import (
    MotionParams,
    ReactionScript,
    displacement_stats,
    focus_positions,
    is_focus_time,
    molecule_positions,
)
from brownian_motion.noise import NoiseField
from molecule_render.frame_io import frame_path, write_frame
from molecule_render.rasterizer import Camera, RenderLayer, blank_frame, render_frame
from molecule_render.scene import ScenePopulation
from motion_smoothing.compositing import decimation_indices, screen_blend
from motion_smoothing.echo import EchoParams, StreamingEcho, TrailSpec, window_size
from .conditions import StimulusCondition, noise_seed, scene_for
from .manifest import MANIFEST_NAME, write_manifest
from .settings import StimulusConfig, load_stimulus_config

FRAMES_DIR = "frames"
LAYERS_DIR = "layers"


@dataclass(frozen=True)
class _Stimulus:
    """Everything needed to render any frame of one stimulus."""
    population: ScenePopulation
    script: ReactionScript
    params: MotionParams
    noise: NoiseField
    camera: Camera
    frame_rate: float

    def positions(self, index: int) -> np.ndarray:
        return molecule_positions(index / self.frame_rate, self.population.n_molecules, self.params,
                                  self.noise, self.population.box, self.script)

    def focus_ids(self, index: int):
        return self.script.partners if is_focus_time(index / self.frame_rate, self.script) else ()

    def context_frame(self, index: int) -> np.ndarray:
        return render_frame(self.population, self.positions(index), RenderLayer.CONTEXT_WITH_FOCUS_MASK,
                            self.camera, self.focus_ids(index))

    def focus_frame(self, index: int) -> np.ndarray:
        focus_ids = self.focus_ids(index)
        if not focus_ids:
            return blank_frame(self.camera)
        return render_frame(self.population, self.positions(index), RenderLayer.FOCUS_ONLY, self.camera, focus_ids)


class StimulusProcessor:
    """
    Turns study conditions into stimulus frame directories.
    - Calibrates the context blur window from measured molecule displacement.
    - Renders focus and context layers at the internal frame rate.
    - Blurs the context layer, screen-blends the focus layer on top and keeps every n-th frame.
    """
    def __init__(self, config: StimulusConfig, threads: int = Config.RENDER_THREADS,
                 cache_frames: int = Config.ECHO_CACHE_FRAMES,
                 encoder_command: str = Config.VIDEO_ENCODER_COMMAND, progress: bool = True):
        self.config = config
        self.threads = max(1, threads)
        self.cache_frames = cache_frames
        self.encoder_command = encoder_command
        self.progress = progress

    @classmethod
    def from_config_path(cls, config_path: Path, **kwargs) -> "StimulusProcessor":
        """Initialize the processor from a YAML/JSON stimulus config."""
        return cls(load_stimulus_config(config_path), **kwargs)

    def _log(self, message: str):
        if self.progress:
            print(message, file=sys.stderr)

    def _stimulus(self, condition: StimulusCondition) -> _Stimulus:
        config = self.config
        return _Stimulus(
            population=scene_for(config, condition.seed),
            script=condition.reaction,
            params=config.motion.params(condition.v(config), condition.tau(config)),
            noise=config.noise(noise_seed(condition.seed)),
            camera=config.camera(),
            frame_rate=config.smoothing.frame_rate,
        )

    def calibrate(self, params: MotionParams, noise: NoiseField, trail_length: int,
                  d_mol: float) -> Dict[str, Any]:
        """Measure mean displacement for (v, tau) and derive the echo window for a trail length."""
        smoothing = self.config.smoothing
        d_bar = displacement_stats(params, smoothing.calibration_molecules, smoothing.calibration_frames,
                                   smoothing.frame_rate, noise, self.config.scene.box)
        echo_params = window_size(TrailSpec(trail_length), d_mol, d_bar, smoothing.frame_rate)
        return {
            "trail_length": trail_length,
            "d_mol": d_mol,
            "d_bar": d_bar,
            "n_window": echo_params.n_window,
            "shutter_seconds": echo_params.shutter_seconds(smoothing.frame_rate),
        }

    def reactants_in_view(self, stimulus: _Stimulus) -> bool:
        """True when both reactant centres stay inside the image (border included) during the focus window."""
        script, camera = stimulus.script, stimulus.camera
        first = int(np.ceil(script.t_start * stimulus.frame_rate - 1e-9))
        last = int(np.ceil(script.focus_end * stimulus.frame_rate - 1e-9))
        for index in range(first, min(last, self.config.n_frames)):
            points = focus_positions(index / stimulus.frame_rate, script, stimulus.params, stimulus.noise,
                                     stimulus.population.box)
            pixels = camera.project(points)
            if np.any(pixels < 0) or np.any(pixels[:, 0] > camera.width) or np.any(pixels[:, 1] > camera.height):
                return False
        return True

    def describe(self, condition: StimulusCondition, stimulus: Optional[_Stimulus] = None) -> Dict[str, Any]:
        """Manifest content that does not depend on rendered pixels."""
        config = self.config
        stimulus = stimulus or self._stimulus(condition)
        population, script = stimulus.population, stimulus.script
        calibration = self.calibrate(stimulus.params, stimulus.noise, condition.vms_trail, population.d_mol)
        return {
            "label": condition.label,
            "condition": condition.to_dict(),
            "config": config.to_dict(),
            "motion": {
                "v": stimulus.params.v,
                "tau": stimulus.params.tau,
                "speed_percent": condition.speed_percent(config),
            },
            "reactants": {
                "ids": list(script.partners),
                "types": [population.type_ids[m] for m in script.partners],
                "colors": [population.type_of(m).color for m in script.partners],
            },
            "phases": {
                "t_start": script.t_start,
                "durations": [script.d_attract, script.d_bond, script.d_repulse],
                "shown_durations": list(script.shown_durations(config.harness.duration)),
                "repulsion_truncated_seconds": script.truncated_seconds(config.harness.duration),
                "internal_frames": script.phase_frames(config.smoothing.frame_rate),
                "output_frames": script.phase_frames(config.output_frame_rate),
            },
            "calibration": calibration,
            "reactants_in_view": self.reactants_in_view(stimulus),
        }

    def process_condition(self, condition: StimulusCondition, output_path: Path,
                          export_layers: bool = False) -> Dict[str, Any]:
        """
        Generate one stimulus: frames in `output_path/frames`, manifest in `output_path/manifest.json`.

        Args:
            condition: Stimulus condition
            output_path: Stimulus directory (created if missing)
            export_layers: Also write the unblurred full-rate layers to `output_path/layers`

        Returns:
            The stimulus manifest
        """
        config = self.config
        self._log(f"\n--- Processing {condition.label} ---")

        self._log("  > Phase 1: Calibrating blur window...")
        stimulus = self._stimulus(condition)
        manifest = self.describe(condition, stimulus)
        calibration = manifest["calibration"]
        self._log(f"    > Mean displacement {calibration['d_bar']:.6g} units/frame, "
                  f"window {calibration['n_window']} frames")
        if not manifest["reactants_in_view"]:
            self._log("  > WARNING: A reactant leaves the viewport during the focus window.")
        truncated = manifest["phases"]["repulsion_truncated_seconds"]
        if truncated > 0:
            self._log(f"  > Repulsion phase cut off by {truncated:.3g} s at the end of the animation")

        frames_dir = output_path / FRAMES_DIR
        try:
            frames_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise IOError(f"Cannot create output directory {frames_dir}: {e}")

        self._log("  > Phase 2: Rendering, blurring and compositing...")
        n_frames = config.n_frames
        keep = decimation_indices(n_frames, config.smoothing.decimation)
        blurred = StreamingEcho(stimulus.context_frame, n_frames, EchoParams(calibration["n_window"]),
                                cache_frames=self.cache_frames, threads=self.threads)
        image_format = config.render.image_format
        hashes = []
        steps = tqdm(blurred.outputs(keep), total=len(keep), desc=condition.label, unit="frame",
                     file=sys.stderr, disable=not self.progress)
        for out_index, (index, context) in enumerate(steps):
            frame = screen_blend(context, stimulus.focus_frame(index))
            hashes.append(write_frame(frame, frame_path(frames_dir, out_index, image_format)))

        if export_layers:
            self._log("  > Exporting unblurred layers...")
            self._export_layers(stimulus, output_path / LAYERS_DIR)

        manifest["frames"] = {
            "directory": FRAMES_DIR,
            "count": len(hashes),
            "width": config.render.width,
            "height": config.render.height,
            "frame_rate": config.output_frame_rate,
            "format": image_format,
        }
        manifest["frame_hashes"] = hashes

        self._log("  > Phase 3: Writing manifest...")
        write_manifest(manifest, output_path / MANIFEST_NAME)
        if self.encoder_command:
            self._encode(frames_dir, output_path)

        self._log(f"--- Successfully processed {condition.label} ---")
        self._log(f"   > Output saved in: {output_path}")
        return manifest

    def _export_layers(self, stimulus: _Stimulus, layers_path: Path):
        """Write both unblurred layers at the internal frame rate, for offline compositing."""
        image_format = self.config.render.image_format
        context_dir, focus_dir = layers_path / "context", layers_path / "focus"
        context_dir.mkdir(parents=True, exist_ok=True)
        focus_dir.mkdir(parents=True, exist_ok=True)

        def export(index: int):
            write_frame(stimulus.context_frame(index), frame_path(context_dir, index, image_format))
            write_frame(stimulus.focus_frame(index), frame_path(focus_dir, index, image_format))

        indices = range(self.config.n_frames)
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            for _ in tqdm(executor.map(export, indices), total=len(indices), desc="Layers", unit="frame",
                          file=sys.stderr, disable=not self.progress):
                pass

    def _encode(self, frames_dir: Path, output_path: Path):
        """Run the configured encoder over the frame directory; failures are warnings only."""
        command = self.encoder_command.format(frames=shlex.quote(str(frames_dir)),
                                              output=shlex.quote(str(output_path / "stimulus.mp4")))
        self._log(f"  > Encoding: {command}")
        try:
            subprocess.run(shlex.split(command), check=True, capture_output=True)
        except (OSError, subprocess.CalledProcessError) as e:
            print(f"  > WARNING: Encoder failed, frames are kept: {e}", file=sys.stderr)


def generate_stimulus(condition: StimulusCondition, out_dir: Path, config: StimulusConfig,
                      threads: int = 1, progress: bool = False, export_layers: bool = False) -> Dict[str, Any]:
    """Generate one stimulus directory and return its manifest."""
    processor = StimulusProcessor(config, threads=threads, progress=progress)
    return processor.process_condition(condition, out_dir, export_layers=export_layers)
