"""
Gestionnaire de cache disque pour les résultats coûteux (pseudo-inverses oracle).

Structure : <base>/<owner>/<operation>/<md5>.pkl
"""

from __future__ import annotations

import hashlib
import pickle
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, TypeVar, Union

from .logger import get_logger

T = TypeVar("T")

DEFAULT_CACHE_DIR = Path("cache")


class CacheManager:
    """Cache disque centralisé, partagé par les composants qui le demandent."""

    def __init__(self, base_cache_dir: Union[str, Path] = DEFAULT_CACHE_DIR):
        """
        Initialise le gestionnaire de cache.

        Args:
            base_cache_dir: Répertoire de base pour le cache
        """
        self.base_cache_dir = Path(base_cache_dir)
        self.base_cache_dir.mkdir(parents=True, exist_ok=True)
        self.logger = get_logger()

    def _generate_key(self, owner: str, operation: str, params: Dict[str, Any]) -> str:
        """
        Clé MD5 stable : les dictionnaires sont triés récursivement avant sérialisation.

        Args:
            owner: Composant propriétaire (ex: "verifier")
            operation: Nom de l'opération (ex: "oracle")
            params: Paramètres identifiant le calcul
        """

        def sort_dict(obj):
            if isinstance(obj, dict):
                return sorted((k, sort_dict(v)) for k, v in obj.items())
            if isinstance(obj, (list, tuple)):
                return [sort_dict(item) for item in obj]
            return obj

        serialized = str([("owner", owner), ("operation", operation), ("params", sort_dict(params))])
        return hashlib.md5(serialized.encode()).hexdigest()

    def _get_cache_path(self, owner: str, operation: str, cache_key: str) -> Path:
        cache_dir = self.base_cache_dir / owner / operation
        cache_dir.mkdir(parents=True, exist_ok=True)
        return cache_dir / f"{cache_key}.pkl"

    def get(self, owner: str, operation: str, params: Dict[str, Any]) -> Optional[T]:
        """
        Récupère un objet du cache.

        Returns:
            Objet mis en cache ou None si absent / illisible
        """
        try:
            cache_path = self._get_cache_path(owner, operation, self._generate_key(owner, operation, params))
            if not cache_path.exists():
                self.logger.debug(f"Cache miss: {owner}.{operation}")
                return None

            with open(cache_path, "rb") as f:
                cached_data = pickle.load(f)

            if isinstance(cached_data, dict) and "timestamp" in cached_data and "data" in cached_data:
                self.logger.debug(f"Cache hit: {owner}.{operation}")
                return cached_data["data"]
            self.logger.warning(f"Invalid cache format for {owner}.{operation}")
            return None

        except Exception as e:
            self.logger.warning(f"Error loading cache for {owner}.{operation}: {e}")
            return None

    def set(self, owner: str, operation: str, params: Dict[str, Any], data: T) -> bool:
        """
        Sauvegarde un objet dans le cache.

        Returns:
            True si la sauvegarde a réussi
        """
        try:
            cache_path = self._get_cache_path(owner, operation, self._generate_key(owner, operation, params))
            cache_data = {
                "data": data,
                "timestamp": datetime.now().isoformat(),
                "owner": owner,
                "operation": operation,
                "params": params,
            }
            with open(cache_path, "wb") as f:
                pickle.dump(cache_data, f)

            self.logger.debug(f"Cache saved: {owner}.{operation}")
            return True

        except Exception as e:
            self.logger.warning(f"Error saving cache for {owner}.{operation}: {e}")
            return False

    def clear(self, owner: Optional[str] = None, operation: Optional[str] = None) -> int:
        """
        Nettoie le cache (tout, un propriétaire, ou une opération d'un propriétaire).

        Returns:
            Nombre de fichiers supprimés
        """
        if owner is None:
            target_path = self.base_cache_dir
        elif operation is None:
            target_path = self.base_cache_dir / owner
        else:
            target_path = self.base_cache_dir / owner / operation

        deleted_count = 0
        try:
            if target_path.exists():
                for cache_file in target_path.rglob("*.pkl"):
                    cache_file.unlink()
                    deleted_count += 1
            self.logger.info(f"Cache cleared: {deleted_count} files deleted")
        except OSError as e:
            self.logger.error(f"Error clearing cache: {e}")
        return deleted_count

    def get_info(self) -> Dict[str, Any]:
        """Nombre de fichiers et taille (Mo) par propriétaire."""
        info: Dict[str, Any] = {"base_directory": str(self.base_cache_dir), "owners": {}, "total_files": 0}
        try:
            for owner_dir in sorted(p for p in self.base_cache_dir.iterdir() if p.is_dir()):
                files = list(owner_dir.rglob("*.pkl"))
                info["owners"][owner_dir.name] = {
                    "files": len(files),
                    "size_mb": round(sum(f.stat().st_size for f in files) / (1024 * 1024), 3),
                }
                info["total_files"] += len(files)
        except OSError as e:
            self.logger.error(f"Error getting cache info: {e}")
        return info


# Instance globale pour faciliter l'utilisation
_cache_manager: Optional[CacheManager] = None


def get_cache_manager(base_cache_dir: Union[str, Path, None] = None) -> CacheManager:
    """Retourne l'instance globale, recréée si un autre répertoire est demandé."""
    global _cache_manager
    wanted = Path(base_cache_dir) if base_cache_dir is not None else None
    if _cache_manager is None or (wanted is not None and _cache_manager.base_cache_dir != wanted):
        _cache_manager = CacheManager(wanted or DEFAULT_CACHE_DIR)
    return _cache_manager
