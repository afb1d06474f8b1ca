"""Server configuration, loadable from JSON with the same conventions as the
wire protocol (snake_case keys, plain values)."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from veld.audio import AudioZone


@dataclass
class ServerConfig:
    listen_port: int = 7600
    instructor_token: str = "change-me"
    world_file: str | None = None
    audio_zone_defaults: AudioZone = field(default_factory=AudioZone)
    max_clients: int = 150
    #: Per-client cap on rebroadcast position updates; 0 disables limiting.
    presence_rate_hz: float = 10.0
    #: WebSocket bridge port for browser clients; defaults to listen_port + 1.
    ws_port: int | None = None

    def __post_init__(self) -> None:
        if self.max_clients < 1:
            raise ValueError("max_clients must be >= 1")
        if not self.instructor_token:
            raise ValueError("instructor_token must be non-empty")
        if self.presence_rate_hz < 0:
            raise ValueError("presence_rate_hz must be >= 0")

    @property
    def effective_ws_port(self) -> int:
        return self.ws_port if self.ws_port is not None else self.listen_port + 1

    @classmethod
    def from_dict(cls, raw: dict[str, Any]) -> ServerConfig:
        zone_raw = raw.get("audio_zone_defaults") or {}
        zone = AudioZone(
            coef=float(zone_raw.get("coef", 0.5)),
            ref_distance=float(zone_raw.get("ref_distance", 1.0)),
            epsilon=float(zone_raw.get("epsilon", 1.0 / 64.0)),
        )
        return cls(
            listen_port=int(raw.get("listen_port", 7600)),
            instructor_token=str(raw.get("instructor_token", "change-me")),
            world_file=raw.get("world_file"),
            audio_zone_defaults=zone,
            max_clients=int(raw.get("max_clients", 150)),
            presence_rate_hz=float(raw.get("presence_rate_hz", 10.0)),
            ws_port=int(raw["ws_port"]) if raw.get("ws_port") is not None else None,
        )

    @classmethod
    def from_file(cls, path: str) -> ServerConfig:
        with open(path, "r", encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def to_dict(self) -> dict[str, Any]:
        zone = self.audio_zone_defaults
        return {
            "listen_port": self.listen_port,
            "instructor_token": self.instructor_token,
            "world_file": self.world_file,
            "audio_zone_defaults": {
                "coef": zone.coef,
                "ref_distance": zone.ref_distance,
                "epsilon": zone.epsilon,
            },
            "max_clients": self.max_clients,
            "presence_rate_hz": self.presence_rate_hz,
            "ws_port": self.ws_port,
        }


__all__ = ["ServerConfig"]
