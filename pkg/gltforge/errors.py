'''
Created on 18 Oct 2026

@author: gltforge developers
'''


class GltForgeError(Exception):
    '''
    Base class of every error raised by the numerical modules.  The CLI
    catches this class, logs .msg and exits non-zero.
    '''

    def __init__(self, msg):
        super().__init__(self)
        self.msg = msg

    def __str__(self):
        return self.msg
