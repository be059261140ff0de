"""Error type for the export tool."""


class ExportError(Exception):
    """Raised for any condition that prevents writing a complete store file."""
