import logging

from .controllers.app_controller import RunController
from .utils.errors import ZitterdynError

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logging(debug=False):
    """Route all log records to stderr so the primary outputs stay byte-stable."""
    logging.basicConfig(level=logging.DEBUG if debug else logging.INFO, format=LOG_FORMAT, force=True)
    logger = logging.getLogger('Zitterdyn')
    if debug:
        logger.debug("Debug mode enabled")
    return logger


def run(command, config):
    """
    Run one subcommand through the controller.

    Returns:
        whatever the controller action returns
    """
    logger = logging.getLogger('Zitterdyn')
    controller = RunController(config)
    actions = {
        "simulate": controller.simulate,
        "spectrum": controller.spectrum,
        "energy": controller.energy,
        "render": controller.render,
        "sweep": controller.sweep,
        "verify": controller.verify,
    }
    try:
        return actions[command]()
    except ZitterdynError as e:
        logger.error(f"{command} failed: {e.message}")
        raise
    finally:
        # Clean up resources
        controller.shutdown()
