from .text import check_specs, dump_network, load_agent, load_network, parse_network, save_agent, save_network

__all__ = [
    "check_specs",
    "dump_network",
    "load_agent",
    "load_network",
    "parse_network",
    "save_agent",
    "save_network",
]
