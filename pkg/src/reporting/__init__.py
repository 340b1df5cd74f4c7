"""Text and JSON reports of verification campaigns."""
