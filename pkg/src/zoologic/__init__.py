"""zoologic: answers questions about animals in images by grounding
object detections into a symbolic knowledge base and running a small
Horn-clause engine over it."""

__version__ = "0.1.0"
