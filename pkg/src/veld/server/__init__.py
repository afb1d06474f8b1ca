from veld.server.config import ServerConfig
from veld.server.core import ClientSession, LessonServer, Room, RoomLog

__all__ = ["ClientSession", "LessonServer", "Room", "RoomLog", "ServerConfig"]
