async def fetch(session, url):
    async with session.get(url) as resp:
        body = await resp.text()
    return body


async def main():
    pass
