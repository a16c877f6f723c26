from ._concentration import *  # noqa: F401, F403
from ._engine import *  # noqa: F401, F403
from ._scenarios import *  # noqa: F401, F403
