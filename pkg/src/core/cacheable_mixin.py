"""
Mixin pour ajouter un cache disque optionnel à une classe.
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Callable, Dict, Optional, TypeVar, Union

from .cache_manager import CacheManager, get_cache_manager

T = TypeVar("T")


class CacheableMixin:
    """Mixin qui ajoute des capacités de cache à une classe.

    Le cache est désactivé tant qu'aucun répertoire n'est fourni : aucun
    dossier n'est créé sur disque dans ce cas.
    """

    def __init__(self, *args, cache_dir: Union[str, Path, None] = None, **kwargs):
        super().__init__(*args, **kwargs)
        self._cache_manager: Optional[CacheManager] = get_cache_manager(cache_dir) if cache_dir is not None else None
        self._cache_enabled = self._cache_manager is not None
        self._cache_owner = self.__class__.__name__.lower()

    def cached_operation(
        self,
        operation_name: str,
        operation_func: Callable[[], T],
        cache_params: Optional[Dict[str, Any]] = None,
    ) -> T:
        """
        Exécute une opération avec mise en cache automatique.

        Args:
            operation_name: Nom de l'opération (pour la clé de cache)
            operation_func: Fonction à exécuter si pas en cache
            cache_params: Paramètres pour générer la clé de cache

        Returns:
            Résultat de l'opération (depuis le cache ou calculé)
        """
        if not self._cache_enabled or self._cache_manager is None:
            return operation_func()

        if cache_params is None:
            cache_params = self._get_default_cache_params()

        cached_result = self._cache_manager.get(self._cache_owner, operation_name, cache_params)
        if cached_result is not None:
            return cached_result

        result = operation_func()
        self._cache_manager.set(self._cache_owner, operation_name, cache_params, result)
        return result

    def _get_default_cache_params(self) -> Dict[str, Any]:
        """
        Paramètres par défaut pour le cache.
        À override dans les classes dérivées.
        """
        return {}

    def clear_cache(self, operation: Optional[str] = None) -> int:
        """Nettoie le cache de cette classe (ou d'une seule opération)."""
        if self._cache_manager is None:
            return 0
        return self._cache_manager.clear(owner=self._cache_owner, operation=operation)

    def cache_info(self) -> Optional[Dict[str, Any]]:
        """Contenu du répertoire de cache, ou ``None`` si le cache est désactivé."""
        if self._cache_manager is None:
            return None
        return self._cache_manager.get_info()
