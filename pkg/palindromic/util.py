'''
Small helpers shared by the notebooks, the command line and the Monte Carlo
routines: progress reporting that works both inside Jupyter and in a plain
interpreter, and number formatting for text reports.
'''
import logging

logger = logging.getLogger(__name__)

mystr = lambda number: "{:.3f}".format(number)


def in_ipynb():
    try:
        if str(type(get_ipython())) == "<class 'ipykernel.zmqshell.ZMQInteractiveShell'>":  # noqa: F821
            return True
        else:
            return False
    except NameError:
        return False


def _every(size, every):
    if every is not None:
        return every
    if size <= 200:
        return 1
    return int(size / 200)     # every 0.5%


def log_progress(sequence, every=None, size=None, name='Items'):
    '''
    Iterate over ``sequence`` while reporting progress.

    Inside a notebook an ipywidgets bar is displayed; elsewhere a DEBUG line
    is logged every ``every`` records.  The bar turns red if the loop body
    raises.
    '''
    is_iterator = False
    if size is None:
        try:
            size = len(sequence)
        except TypeError:
            is_iterator = True
    if size is not None:
        every = _every(size, every)
    else:
        assert every is not None, 'sequence is iterator, set every'

    if not in_ipynb():
        index = 0
        for index, record in enumerate(sequence, 1):
            if index == 1 or index % every == 0:
                logger.debug('%s: %d / %s', name, index, '?' if is_iterator else size)
            yield record
        logger.debug('%s: %d done', name, index)
        return

    from ipywidgets import IntProgress, HTML, VBox
    from IPython.display import display

    if is_iterator:
        progress = IntProgress(min=0, max=1, value=1)
        progress.bar_style = 'info'
    else:
        progress = IntProgress(min=0, max=size, value=0)
    label = HTML()
    box = VBox(children=[label, progress])
    display(box)

    index = 0
    try:
        for index, record in enumerate(sequence, 1):
            if index == 1 or index % every == 0:
                if is_iterator:
                    label.value = '{name}: {index} / ?'.format(name=name, index=index)
                else:
                    progress.value = index
                    label.value = u'{name}: {index} / {size}'.format(
                        name=name,
                        index=index,
                        size=size
                    )
            yield record
    except BaseException:
        progress.bar_style = 'danger'
        raise
    else:
        progress.bar_style = 'success'
        progress.value = index
        label.value = "{name}: {index}".format(
            name=name,
            index=str(index or '?')
        )