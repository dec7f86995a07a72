"""Find oxbow code in Erlang projects: leftovers that are no longer used."""

__version__ = "0.1.0"
