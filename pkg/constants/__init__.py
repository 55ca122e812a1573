# Constants package.
