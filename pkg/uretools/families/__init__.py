from ._abstract import *  # noqa: F401, F403
from ._funcs import *  # noqa: F401, F403
from ._locscale import *  # noqa: F401, F403
from ._nef import *  # noqa: F401, F403
