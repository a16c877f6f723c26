from .baseball import *  # noqa: F401, F403
from .estimators import *  # noqa: F401, F403
from .exceptions import *  # noqa: F401, F403
from .families import *  # noqa: F401, F403
from .isotonic import *  # noqa: F401, F403
from .optimize import *  # noqa: F401, F403
from .sim import *  # noqa: F401, F403
from .types import *  # noqa: F401, F403
from .ure import *  # noqa: F401, F403
