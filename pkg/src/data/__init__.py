from .stack_provider import (load_image,
                             read_plane,
                             write_plane,
                             read_depth,
                             write_depth,
                             load_scene,
                             write_image,
                             save_stack,
                             load_stack)

__all__ = [
    'load_image',
    'read_depth',
    'write_depth',
    'load_scene',
    'write_image',
    'save_stack',
    'load_stack',
    'read_plane',
    'write_plane',
]
