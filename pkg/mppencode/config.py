"""Configuration files for the command line interface.

A configuration file is a JSON object. Top-level keys set option defaults
for every command; a key named after a command holds an object of defaults
for that command only. Options given on the command line always win.
"""
import json
import logging
import os

import appdirs

APP_NAME = "mppencode"
CONFIG_FILENAME = "config.json"


def default_config_path():
    return os.path.join(appdirs.user_config_dir(APP_NAME), CONFIG_FILENAME)


def load_config(path=None):
    """Reads the configuration at ``path``, or the one in the user
    configuration directory when ``path`` is ``None``. A missing default
    file gives an empty configuration.

    :rtype: ``dict``
    :raises ValueError: If the file is not a JSON object.
    """
    if path is None:
        path = default_config_path()
        if not os.path.isfile(path):
            return {}
    logging.debug("Loading configuration from %s", path)
    with open(path, "r", encoding="utf-8") as f:
        try:
            config = json.load(f)
        except json.JSONDecodeError as e:
            raise ValueError(f"Configuration file {path} is not valid JSON: {e}")
    if not isinstance(config, dict):
        raise ValueError(f"Configuration file {path} must hold a JSON object.")
    return config


def option_key(name):
    return name.replace("-", "_")


def default_map(config, commands):
    """Per-command default maps for ``click``: shared keys overlaid with each
    command's own section.

    :param config: Loaded configuration.
    :param commands: Command names.
    :rtype: ``dict``
    """
    shared = {
        option_key(k): v
        for k, v in config.items()
        if k not in commands and not isinstance(v, dict)
    }
    maps = {}
    for command in commands:
        section = config.get(command, {})
        if not isinstance(section, dict):
            raise ValueError(f"Configuration section {command!r} must be an object.")
        maps[command] = {**shared, **{option_key(k): v for k, v in section.items()}}
    return maps
