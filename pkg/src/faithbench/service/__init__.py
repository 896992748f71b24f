"""HTTP annotation service: corpus browsing, search, annotation persistence."""

from .app import ServiceCorpus, create_app, load_service_corpus
from .store import AnnotationStore

__all__ = ["AnnotationStore", "ServiceCorpus", "create_app", "load_service_corpus"]
